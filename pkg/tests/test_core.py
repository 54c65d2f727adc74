import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relator_lab.core import (
    Coeff,
    CyclicGroup,
    FPElement,
    FreeGroup,
    FreeProduct,
    FreeProductGroup,
    GroupError,
    Homomorphism,
    PermutationGroup,
    RelativePresentation,
    RelativeRelator,
    SignedLetter,
    TableGroup,
    TrivialGroup,
    Word,
    apply_hom,
    cyclic_reduce,
    fp_normalize,
    free_reduce,
    from_atoms,
    identity_hom,
    letter,
    power,
    relator,
    restrict_alphabet,
    substitute,
    symmetric_group_table,
    verify_hom,
)
from relator_lab.core.groups import compose, format_cycles, parse_cycles

F4 = FreeGroup(4)
g1, g2, g3, g4 = F4.generators()
Z2 = CyclicGroup(2)
S3 = symmetric_group_table(3)


def W(text):
    return Word.parse(text)


# -- words -------------------------------------------------------------------


def test_signed_letter_exponent_is_checked():
    with pytest.raises(ValueError):
        letter("x", 2)
    with pytest.raises(ValueError):
        Word([SignedLetter("x", 0)])


def test_parse_and_print():
    assert str(W("x y^-1 x^2")) == "x y^-1 x x"
    assert W("1") == Word() and str(Word()) == "1"
    with pytest.raises(ValueError):
        W("x^")


@pytest.mark.parametrize(
    "src, want",
    [("x x^-1", ""), ("x y y^-1 x", "x x"), ("x y x", "x y x"), ("x y^-1 y x^-1 z", "z")],
)
def test_free_reduce_examples(src, want):
    assert free_reduce(W(src)) == W(want)


def test_cyclic_reduce():
    assert cyclic_reduce(W("x y z y^-1 x^-1")) == W("z")
    assert W("x y x^-1").is_reduced() and not W("x y x^-1").is_cyclically_reduced()


letters_st = st.lists(st.tuples(st.sampled_from("xyz"), st.sampled_from((1, -1))), max_size=14).map(
    lambda xs: Word(SignedLetter(a, e) for a, e in xs)
)


def _rewrite_to_fixpoint(w):
    # single-step cancellations, restarted from the left each time
    w = list(w)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i].name == w[i + 1].name and w[i].exp == -w[i + 1].exp:
                del w[i : i + 2]
                changed = True
                break
    return Word(w)


@given(letters_st)
def test_free_reduce_matches_single_step_rewriting(w):
    r = free_reduce(w)
    assert r == _rewrite_to_fixpoint(w)
    assert free_reduce(r) == r and len(r) <= len(w)


# -- groups ------------------------------------------------------------------


@pytest.mark.parametrize("H", [TrivialGroup(), Z2, CyclicGroup(5), S3, CyclicGroup(0), F4])
def test_group_axioms(H):
    H.check_axioms()


def test_table_group_rejects_non_groups():
    with pytest.raises(GroupError):
        TableGroup([[0, 1], [1, 1]])
    with pytest.raises(GroupError):
        TableGroup([[0, 1, 2], [1, 0, 2], [2, 2, 0]])
    nonassoc = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError):
        TableGroup(nonassoc)


def test_table_file_round_trip(tmp_path):
    p = tmp_path / "s3.table"
    rows = "\n".join(" ".join(map(str, r)) for r in S3.table)
    p.write_text(f"order 6\n{rows}\n")
    T = TableGroup.from_file(p, display="s3.table")
    assert T == S3 and T.describe() == "table s3.table"
    p.write_text("order 3\n0 1\n")
    with pytest.raises(GroupError):
        TableGroup.from_file(p)


def test_symmetric_table_is_s3():
    assert S3.order == 6
    orders = sorted(_order(S3, a) for a in S3.elements())
    assert orders == [1, 2, 2, 2, 3, 3]


def _order(H, a):
    k, x = 1, a
    while not H.is_identity(x):
        x, k = H.mul(x, a), k + 1
    return k


def test_permutation_group_and_cycles():
    G = PermutationGroup(3, [parse_cycles("(0 1)", 3), parse_cycles("(0 1 2)", 3)])
    assert G.order == 6
    assert format_cycles(parse_cycles("(0 1 2)", 3)) == "(0 1 2)"
    p, q = parse_cycles("(0 1)", 3), parse_cycles("(1 2)", 3)
    assert compose(p, q) == tuple(q[p[i]] for i in range(3))
    assert G.describe() == "perm(3: (0 1), (0 1 2))"


def test_free_group_elements():
    a = F4.parse_element("g1 g2^-1 g2 g3^2")
    assert F4.format_element(a) == "g1 g3 g3"
    assert F4.mul(a, F4.inv(a)) == F4.identity


def test_free_product_group():
    G = FreeProductGroup([Z2, FreeGroup(1)])
    a = G.parse_element("1:1 . 2:g1")
    assert G.mul(a, G.inv(a)) == ()
    assert G.mul(G.inject(0, 1), G.inject(0, 1)) == ()
    assert G.order is None and G.describe() == "Z(2) * free(1)"
    assert FreeProductGroup([Z2, TrivialGroup()]).order == 2


# -- free products -----------------------------------------------------------


def test_fp_normalize_examples():
    car = FreeProduct(S3)
    h = 1
    assert fp_normalize([Coeff(h), Coeff(S3.inv(h)), letter("x")], S3) == car.letter("x")
    e = fp_normalize([letter("x"), Coeff(0), letter("y")], S3)
    assert e.syllables == (W("x y"),)
    for h1, h2 in itertools.product(S3.elements(), repeat=2):
        got = fp_normalize([Coeff(h1), letter("x"), letter("x", -1), Coeff(h2)], S3)
        prod = S3.mul(h1, h2)
        assert got == (FPElement() if prod == 0 else FPElement((Coeff(prod),)))


def test_fp_basis_is_enforced():
    with pytest.raises(KeyError):
        fp_normalize([letter("q")], TrivialGroup(), basis={"x"})


mixed_st = st.lists(
    st.one_of(
        st.tuples(st.sampled_from("xy"), st.sampled_from((1, -1))).map(lambda t: SignedLetter(*t)),
        st.sampled_from(range(6)).map(Coeff),
    ),
    max_size=12,
)


def _fp_rewrite(atoms):
    """Oracle: single-step rewriting (cancel, merge coefficients, drop identities)."""
    a = list(atoms)
    changed = True
    while changed:
        changed = False
        for i, x in enumerate(a):
            if isinstance(x, Coeff) and x.value == 0:
                del a[i]
                changed = True
                break
        if changed:
            continue
        for i in range(len(a) - 1):
            x, y = a[i], a[i + 1]
            if isinstance(x, Coeff) and isinstance(y, Coeff):
                a[i : i + 2] = [Coeff(S3.mul(x.value, y.value))]
                changed = True
                break
            if isinstance(x, SignedLetter) and isinstance(y, SignedLetter) and x == y.inverse():
                del a[i : i + 2]
                changed = True
                break
    return a


@settings(max_examples=150)
@given(mixed_st, mixed_st)
def test_fp_normalize_properties(u, v):
    car = FreeProduct(S3)
    nu, nv = car.normalize(u), car.normalize(v)
    assert car.normalize(u + v) == car.normalize([nu, nv])
    assert car.normalize([nu, car.identity]) == nu
    assert nu.atoms() == _fp_rewrite(u)
    assert car.normalize([nu, car.inv(nu)]) == car.identity


# -- relators and presentations ----------------------------------------------


def test_skeleton_examples():
    R = relator(["e", Coeff(g1), "a", Coeff(g2), "e^-1", Coeff(g3), "a^-1", Coeff(g4)], F4)
    assert R.skeleton() == W("e a e^-1 a^-1") and R.length == 4
    assert relator(["x"]).skeleton() == W("x")
    R = relator(["x", Coeff(1), "x", Coeff(1)], Z2)
    assert R.skeleton() == W("x x")


def test_from_atoms_moves_leading_coefficients_to_the_end():
    R = from_atoms([Coeff(1), letter("x"), letter("y"), Coeff(1)], Z2)
    assert R.terms == ((letter("x"), 0), (letter("y"), 0))
    with pytest.raises(ValueError):
        from_atoms([Coeff(1)], Z2)


def test_presentation_invariants():
    R = relator(["x y"])
    with pytest.raises(ValueError):
        RelativePresentation(("x",), TrivialGroup(), (R,))
    with pytest.raises(ValueError):
        RelativePresentation(("x", "y"), TrivialGroup(), ())
    with pytest.raises(ValueError):
        RelativePresentation(("x", "y"), Z2, (RelativeRelator(((letter("x"), 7),)),))


def test_power_examples():
    R = relator(["x y x^-1", Coeff(1)], Z2)
    assert power(R, 1) == R
    xh = relator(["x", Coeff(1)], Z2)
    assert power(xh, 2).terms == ((letter("x"), 1), (letter("x"), 1))
    for n in (2, 3, 5):
        assert power(R, n).skeleton() == Word(tuple(R.skeleton()) * n)
    with pytest.raises(ValueError):
        power(R, 0)


def test_substitute_examples():
    H = Z2
    R = relator(["x y^-1", Coeff(1)], H)
    for n in (1, 2, 3):
        S = relator([" ".join(["z"] * n)], H)
        assert substitute(S, "z", R, H) == power(R, n)
    xh = relator(["x", Coeff(1)], H)
    S = relator(["y z y^-1 z^-1"], H)
    got = substitute(S, "z", xh, H)
    want = from_atoms([letter("y"), letter("x"), Coeff(1), letter("y", -1), Coeff(1), letter("x", -1)], H)
    assert got == want
    with pytest.raises(ValueError):
        substitute(relator(["x z"], H), "z", xh, H)  # x on both sides
    with pytest.raises(ValueError):
        substitute(relator(["y"], H), "z", xh, H)


def test_restrict_alphabet():
    P = RelativePresentation(("x", "y", "z"), TrivialGroup(), (relator(["x y x^-1 y^-1"]),))
    P1, rank = restrict_alphabet(P)
    assert P1.alphabet == ("x", "y") and rank == 1
    P2, rank = restrict_alphabet(P1)
    assert P2 == P1 and rank == 0


# -- homomorphisms -----------------------------------------------------------


def _commutator():
    return RelativePresentation(("x", "y"), TrivialGroup(), (relator(["x y x^-1 y^-1"]),))


def test_identity_hom_passes():
    P = _commutator()
    rep = verify_hom(identity_hom(P))
    assert rep.passed and rep.checks[0].outcome == "exact"
    g = fp_normalize(W("x y x"), P.group)
    assert apply_hom(identity_hom(P), g) == g


def test_hom_killing_letters_with_nontrivial_coefficient_fails():
    P = RelativePresentation(("x",), Z2, (relator(["x", Coeff(1)], Z2),))
    car = FreeProduct(Z2)
    rep = verify_hom(Homomorphism(P, P, {"x": car.identity}))
    assert not rep.passed and rep.checks[0].outcome == "fail"


def test_relator_match_up_to_rotation_and_inversion():
    P = _commutator()
    car = FreeProduct(P.group)
    swap = Homomorphism(P, P, {"x": car.letter("y"), "y": car.letter("x")})
    assert verify_hom(swap).checks[0].outcome in ("inverse", "inverse-cyclic")
    conj = Homomorphism(P, P, {"x": car.letter("y"), "y": car.letter("x", -1)})
    assert verify_hom(conj).passed


def test_undefined_generator_is_named():
    P = _commutator()
    car = FreeProduct(P.group)
    with pytest.raises(KeyError, match="y"):
        apply_hom(Homomorphism(P, P, {"x": car.letter("x")}), W("x y"))
