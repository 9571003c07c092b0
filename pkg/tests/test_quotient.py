from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from carpet import chamanara as ch
from carpet import quotient as qu


@st.composite
def points(draw, n=2):
    q = draw(st.integers(1, 30))
    return ch.canonicalize(Fraction(draw(st.integers(0, q)), q), Fraction(draw(st.integers(0, q)), q), n)


@given(points(), st.sampled_from([2, 3]))
def test_rotation_is_an_involution(z, n):
    z = ch.canonicalize(z.x, z.y, n)
    assert qu.rotate(qu.rotate(z)) == z


@given(points())
def test_induced_map_commutes_with_projection(z):
    q = qu.canonicalize_q(z)
    assert qu.induced_apply(q) == qu.canonicalize_q(ch.baker(z))
    assert qu.induced_apply(qu.induced_apply(q), "inverse") == q


@given(points(n=3))
def test_fibers_have_one_or_two_members(z):
    q = qu.canonicalize_q(z)
    fib = qu.fiber(q)
    assert len(fib) == (1 if q.branch else 2)
    assert all(qu.canonicalize_q(w) == q for w in fib)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_catalog_points_are_exactly_the_branch_points(n):
    cat = qu.BranchCatalog(n, 5)
    for _, z in cat.points():
        assert qu.canonicalize_q(z).branch
    for z in qu.boundary_classes(n, 5, range(1, 7)):
        assert qu.canonicalize_q(z).branch == (z.key in cat.keys())


def test_lengths():
    assert qu.l_const(3, 1) == Fraction(4, 3)
    assert qu.l_const(3, 2) == Fraction(4, 9)
    assert qu.m_const(2, 2) == Fraction(1, 2) + Fraction(1, 4)
    assert qu.m_hat_1(4) == Fraction(3, 4)


def test_j1_parts():
    assert qu.j1_part(Fraction(2, 5), 3) == "check"
    assert qu.j1_part(Fraction(3, 5), 3) == "hat"
    assert qu.j1_part(Fraction(9, 10), 3) == "tilde"
    with pytest.raises(ValueError):
        qu.j1_part(Fraction(1, 5), 3)


def test_factor_chain_sweep_small():
    r = qu.exhaustive_factor_chain(2, 6)
    assert r["checked"] > 0
    assert not r["semiconjugacy_failures"] and not r["equivariance_failures"]


def test_rotation_respects_side_classes():
    for z in qu.boundary_classes(3, 3, range(1, 5)):
        assert qu.rotation_respects_classes(z)
