import random

import pytest

from relator_lab.core import (
    Coeff,
    CyclicGroup,
    FreeGroup,
    RelativePresentation,
    SignedLetter,
    TrivialGroup,
    relator,
    symmetric_group_table,
)
from relator_lab.cover import LevelledCoeff, lift
from relator_lab.embed import to_strong
from relator_lab.kernel import (
    IDENTITY,
    GBarElement,
    KernelData,
    KernelDepthError,
    KernelError,
    WordProblem,
    collapse_items,
    embed_G,
    extremes,
    gbar_equal,
    gbar_mul,
    hnn_presentation,
    kletter,
    kshift,
    needed_levels,
    retract_Gbar,
    stable,
    verify_iso,
)
from relator_lab.kernel.construction import S
from relator_lab.kernel.gbar import embed_G_folded

F3 = FreeGroup(3)
h2, h3, h4 = F3.generators()


def worked():
    # e h1 a h2 e^-1 h3 a^-1 h4 with h1 = 1
    R = relator(["e a", Coeff(h2), "e^-1", Coeff(h3), "a^-1", Coeff(h4)], F3)
    return RelativePresentation(("e", "a"), F3, (R,))


def commutator():
    return RelativePresentation(("x", "y"), TrivialGroup(), (relator(["x y x^-1 y^-1"]),))


@pytest.fixture(scope="module")
def kd():
    return KernelData(worked(), "e")


@pytest.fixture(scope="module")
def z2():
    return WordProblem(commutator())


def inv(h):
    return F3.inv(h)


# -- extremes and the trivial case -------------------------------------------


def test_extremes_worked_example():
    ext = extremes(worked(), "e")
    assert (ext.M - ext.m, ext.trivial, ext.f) == (2, False, "a")


def test_trivial_case():
    Z2 = CyclicGroup(2)
    P = RelativePresentation(("e", "a"), Z2, (relator(["e", Coeff(1), "a^-1", Coeff(1)], Z2),))
    assert extremes(P, "e").trivial
    with pytest.raises(KernelError):
        KernelData(P, "e")
    wp = WordProblem(P)
    assert wp.trivial and wp.kernel is None
    # e = h'^-1 a h^-1, and G = <a> * H is free on a over H
    assert wp.equal([SignedLetter("e", 1)], [Coeff(1), SignedLetter("a", 1), Coeff(1)])
    assert not wp.is_trivial("a") and not wp.is_trivial([Coeff(1)])


def test_not_strong_is_rejected():
    P = RelativePresentation(("a", "b", "c", "d"), TrivialGroup(), (relator(["a b c^-1 d^-1"]),))
    with pytest.raises(KernelError):
        KernelData(P, "a")
    with pytest.raises(KernelError):
        KernelData(commutator(), "x", f="x")


# -- decomposition -----------------------------------------------------------


def test_decomposition_of_worked_example(kd):
    assert (kd.M, kd.m, kd.epsilon) == (1, -1, -1)
    assert (kd.a, kd.b, kd.f) == ("a", "a", "a")
    assert kd.h == inv(h2) and kd.h_prime == h4
    assert kd.normalization.inverted
    assert kd.gamma0_k() == ()
    assert kd.delta0_k() == (LevelledCoeff(0, inv(h3)),)


def test_commutator_coefficients_are_trivial():
    kd = KernelData(commutator(), "x")
    assert kd.h == kd.h_prime == TrivialGroup().identity
    assert kd.M - kd.m == 2


def test_collapsed_relator_r0(kd):
    R0 = kd.collapse(0)
    want = (
        kletter(0, "e"),
        LevelledCoeff(1, inv(h2)),
        kletter(-1, "e", -1),
        LevelledCoeff(-1, inv(h4)),
        LevelledCoeff(0, inv(h3)),
    )
    assert R0.items == want
    assert R0.alpha == (LevelledCoeff(1, inv(h2)),)
    assert R0.beta == (LevelledCoeff(-1, inv(h4)), LevelledCoeff(0, inv(h3)))


def test_collapse_without_f_only_rewrites_inverses():
    path = lift(0, [SignedLetter("e", 1), Coeff(h3), SignedLetter("e", -1), SignedLetter("e", -1)], {"e": 1})
    got = collapse_items(path.items, "a")
    assert got == (kletter(0, "e"), LevelledCoeff(1, h3), kletter(0, "e", -1), kletter(-1, "e", -1))


def test_collapse_shape_and_equivariance(kd):
    for n in range(-3, 4):
        c = kd.collapse(n)
        assert c.lead == kletter(n + kd.M - 1, "e")
        assert c.middle == kletter(n + kd.m, "e", kd.epsilon)
        for it in c.alpha + c.beta:
            if isinstance(it, SignedLetter) and it.name[2] == "e":
                assert n + kd.m < it.name[1] < n + kd.M - 1
        assert c.items == kshift(kd.collapse(0).items, n)


# -- HNN window and the isomorphism ------------------------------------------


def test_hnn_window_counts(kd):
    win = hnn_presentation(kd, 1)
    assert len(win.relators) == 3
    # H generated by 3 elements, no letters other than e, f: 3 conjugations per step
    assert len(win.conjugations) == 2 * 3
    r = kd.collapse(-1).items
    assert win.shift(win.shift(r)) == win.shift(r, 2) == kd.collapse(1).items
    with pytest.raises(KernelError):
        hnn_presentation(kd, 0)


def test_iso_of_level_one_e(kd):
    car = kd.carrier
    s, si = stable(1), stable(-1)
    e0 = SignedLetter(("e", 0, "e"), 1)
    want = car.normalize([s, Coeff(h3), si, Coeff(h4), e0, s, s, Coeff(h2), si, si])
    assert kd.iso_e(1) == want
    # independently: R_1 = 1 solved for (1,e) gives (1,h3)(0,h4)(0,e)(2,h2)
    solved = [LevelledCoeff(1, h3), LevelledCoeff(0, h4), kletter(0, "e"), LevelledCoeff(2, h2)]
    assert kd.map_items(solved) == want


def test_iso_simple_generators(kd):
    car = kd.carrier
    assert kd.iso_forward(kletter(0, "e")) == car.letter(("e", 0, "e"))
    assert kd.iso_forward(S) == car.letter(S)
    assert kd.iso_inverse(SignedLetter(S, 1)) == (stable(1),)
    assert kd.iso_inverse(SignedLetter(("e", 0, "e"), 1)) == (kletter(0, "e"),)
    P = RelativePresentation(("x", "y", "z"), TrivialGroup(), (relator(["x y z x^-1 y^-1 z^-1"]),))
    res = to_strong(P)
    k3 = KernelData(res.presentation, res.e)
    other = k3.others[0]
    assert k3.iso_forward(kletter(0, other)) == k3.carrier.letter(("x", other))
    assert k3.iso_inverse(SignedLetter(("x", other), 1)) == (kletter(0, other),)
    with pytest.raises(KernelError):
        k3.iso_forward(kletter(0, k3.f))


def test_verify_iso_worked_example(kd):
    rep = verify_iso(kd, 2)
    assert rep.passed
    assert rep.as_dict()["counts"] == {"V1": 5, "V2": 12, "V3": 5}


def test_verify_iso_commutator():
    assert verify_iso(KernelData(commutator(), "x"), 3).passed


def test_alpha_patch_breaks_only_r1(kd):
    bad = kd.with_alpha_patch({1: kd.alpha(1) + (stable(1),)})
    rep = verify_iso(bad, 3)
    fails = rep.failures()
    assert fails and all(c.kind == "V1" for c in fails)
    assert [c.item for c in fails] == ["R_1"]


def test_depth_error():
    k = KernelData(worked(), "e", max_level=2)
    with pytest.raises(KernelDepthError):
        k.iso_e(10)
    with pytest.raises(KernelDepthError):
        embed_G(k, "a a a a a e")


# -- G-bar and the embedding -------------------------------------------------


def test_embed_relator_and_f(kd):
    assert embed_G(kd, worked().relator.atoms()) == IDENTITY
    assert embed_G(kd, "a") == GBarElement(kd.carrier.identity, 1)
    assert embed_G(kd, "a^-1 a") == IDENTITY
    assert embed_G(kd, []) == IDENTITY


def test_psi_eta_is_identity(kd):
    for n in range(-4, 5):
        w = [SignedLetter("a", 1 if n > 0 else -1)] * abs(n)
        assert embed_G(kd, w).n == n


def _pool(P):
    out = [SignedLetter(x, e) for x in P.alphabet for e in (1, -1)]
    gens = P.group.probes(8)
    return out + [Coeff(h) for h in gens if not P.group.is_identity(h)]


def test_embed_is_a_homomorphism(kd):
    rng = random.Random(3)
    pool = _pool(worked())
    for _ in range(60):
        w1 = [rng.choice(pool) for _ in range(rng.randint(0, 5))]
        w2 = [rng.choice(pool) for _ in range(rng.randint(0, 5))]
        assert embed_G(kd, w1 + w2) == gbar_mul(kd, embed_G(kd, w1), embed_G(kd, w2))
        assert embed_G(kd, w1) == embed_G_folded(kd, w1)


def test_level_range_bound(kd):
    rng = random.Random(4)
    pool = _pool(worked())
    for _ in range(50):
        w = [rng.choice(pool) for _ in range(rng.randint(1, 8))]
        phi, p = [0], 0
        for a in w:
            if isinstance(a, SignedLetter):
                p += a.exp
                phi.append(p)
        for lvl in needed_levels(kd, w):
            assert min(phi) + kd.m <= lvl <= max(phi) + kd.M


@pytest.mark.parametrize("H", [CyclicGroup(2), symmetric_group_table(3)])
def test_coefficients_embed_injectively(H):
    R = relator(["x", Coeff(H.elements()[1]), "y x^-1 y^-1"], H)
    wp = WordProblem(RelativePresentation(("x", "y"), H, (R,)))
    images = {wp.normal_form([Coeff(h)]) for h in H.elements()}
    assert len(images) == H.order


def test_retraction_roundtrip(kd):
    car = kd.carrier
    for a in _pool(worked()):
        g = embed_G(kd, [a])
        assert embed_G(kd, retract_Gbar(kd, g)) == g
    assert retract_Gbar(kd, GBarElement(car.letter(S), 0)) == [SignedLetter("a", 1)]
    assert retract_Gbar(kd, IDENTITY) == []


# -- word problem ------------------------------------------------------------


def test_gbar_equal_examples(kd):
    R = worked().relator.atoms()
    w = [SignedLetter("e", 1), Coeff(h2), SignedLetter("a", -1)]
    for i in range(len(w) + 1):
        assert gbar_equal(kd, w, w[:i] + R + w[i:])
    assert not gbar_equal(kd, "e", [])


def test_z2_word_problem(z2):
    assert z2.equal("x y", "y x")
    for n in range(-3, 4):
        for m in range(-3, 4):
            w = [SignedLetter("x", 1 if n > 0 else -1)] * abs(n) + [SignedLetter("y", 1 if m > 0 else -1)] * abs(m)
            assert z2.is_trivial(w) == (n == 0 and m == 0)


def test_normal_form_agrees_with_is_trivial(z2):
    rng = random.Random(9)
    pool = _pool(commutator())
    for _ in range(40):
        w = [rng.choice(pool) for _ in range(rng.randint(0, 6))]
        assert z2.normal_form(w).is_identity == z2.is_trivial(w)


def test_free_letters_split_off():
    P = RelativePresentation(("x", "y", "t"), TrivialGroup(), (relator(["x y x^-1 y^-1"]),))
    wp = WordProblem(P)
    assert wp.free_letters == ("t",)
    assert wp.equal("t x y t^-1", "t y x t^-1")
    assert not wp.equal("t x", "x t")
    assert wp.normal_form("t x t^-1").syllables[0][0] == "F"


def test_corpus_relator_insertion(corpus):
    rng = random.Random(12)
    for P in corpus[:20]:
        wp = WordProblem(P)
        pool = _pool(P)
        R = P.relator.atoms()
        for _ in range(10):
            w = [rng.choice(pool) for _ in range(rng.randint(0, 4))]
            i = rng.randint(0, len(w))
            assert wp.equal(w, w[:i] + R + w[i:])
