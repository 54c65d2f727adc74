import pytest
from hypothesis import given
from hypothesis import strategies as st

from relator_lab.core import Coeff, FreeGroup, SignedLetter, Word, letter, relator
from relator_lab.cover import LevelledCoeff, LevelledEdge, LevelledPath, lift, project, theta_sum, translate

F3 = FreeGroup(3)
g1, g2, g3 = F3.generators()

ONE = {"e": 1, "a": 1}


def test_edge_incidence():
    ed = LevelledEdge(3, letter("x", -1), 2)
    assert ed.start == 3 and ed.end == 1
    inv = ed.inverse()
    assert inv == LevelledEdge(1, letter("x"), 2) and inv.inverse() == ed
    c = LevelledCoeff(4, g1)
    assert c.start == c.end == 4 and c.inverse(F3) == LevelledCoeff(4, F3.inv(g1))


def test_broken_paths_are_rejected():
    with pytest.raises(ValueError):
        LevelledPath(0, (LevelledEdge(0, letter("x"), 1), LevelledEdge(0, letter("x"), 1)))


def test_lift_relator_is_closed():
    R = relator(["e", Coeff(g1), "a", Coeff(g2), "e^-1", Coeff(g3), "a^-1"], F3)
    atoms = R.atoms()
    p = lift(0, atoms, ONE)
    assert p.closed and [it.level for it in p.items if isinstance(it, LevelledEdge)] == [0, 1, 2, 1]
    edge_levels = [0] + [it.end for it in p.items if isinstance(it, LevelledEdge)]
    assert edge_levels == [0, 1, 2, 1, 0]
    for n in (-3, 5):
        assert lift(n, atoms, ONE).closed


def test_lift_single_coefficient():
    p = lift(7, [Coeff(g2)], ONE)
    assert p.closed and p.items == (LevelledCoeff(7, g2),)
    assert project(p) == [Coeff(g2)]


def test_lift_rejects_other_items():
    with pytest.raises(TypeError):
        lift(0, ["x"], {"x": 1})


atoms_st = st.lists(
    st.one_of(
        st.tuples(st.sampled_from("xy"), st.sampled_from((1, -1))).map(lambda t: SignedLetter(*t)),
        st.sampled_from(F3.generators()).map(Coeff),
    ),
    max_size=12,
)
theta_st = st.fixed_dictionaries({"x": st.integers(-3, 3), "y": st.integers(-3, 3)})


@given(atoms_st, theta_st, st.integers(-10, 10), st.integers(-10, 10))
def test_translate_lift_project(alpha, theta, n, i):
    p = lift(n, alpha, theta)
    assert project(p) == list(alpha)
    assert translate(i, p) == lift(n + i, alpha, theta)
    assert translate(-i, translate(i, p)) == p
    assert translate(0, p) == p
    assert translate(i, translate(n, p)) == translate(i + n, p)
    assert project(translate(i, p)) == project(p)
    assert p.closed == (theta_sum(alpha, theta) == 0)


def test_lift_of_word_levels():
    p = lift(0, list(Word.parse("e a e^-1 a^-1")), ONE)
    assert p.levels() == [0, 1, 2, 1, 0]
