from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from carpet import hyperlocal as hl
from carpet.surd import QuadSurd

L = hl.HypLinear(2)
SPEC = hl.RegionSpec(2, Fraction(1, 10))


def brute_excursion(lam, eps, w):
    """Direct count from the entry point: steps inside the box and inner-sector visits."""
    p, q = w
    K = hits = 0
    while abs(p) < lam * eps and abs(q) < lam * eps:
        K += 1
        if abs(p) > abs(q) and p > 0 and abs(p) < eps and abs(q) < eps:
            hits += 1
        p, q = p / lam, q * lam
    return K, hits


def test_region_labels():
    assert hl.classify_region(SPEC, (Fraction(1, 20), Fraction(1, 40))) == hl.D1_STAR
    assert hl.classify_region(SPEC, (Fraction(3, 20), Fraction(1, 40))) == hl.D1_E
    assert hl.classify_region(SPEC, (Fraction(-1, 20), Fraction(1, 40))) == hl.D3_STAR
    assert hl.classify_region(SPEC, (Fraction(1, 40), Fraction(-1, 20))) == hl.D4
    assert hl.classify_region(SPEC, (Fraction(1, 20), Fraction(1, 20))) == hl.AXIS
    assert hl.classify_region(SPEC, (Fraction(1, 4), 0)) == hl.OUTSIDE


def test_excursions_match_direct_count():
    for z in hl.sample_entries(SPEC, 200, seed=3):
        ex = hl.excursion_stats(L, SPEC, z)
        assert ex is not None and ex.N == 0
        assert (ex.K, ex.hits) == brute_excursion(2, Fraction(1, 10), L.apply(z))
        assert ex.ratio <= Fraction(1, 2)


@given(st.integers(0, 10**6 - 1), st.integers(1, 10**6))
def test_half_bound_on_random_entries(a, b):
    p = Fraction(1, 10) + Fraction(a, 10**7)
    q = p * Fraction(b, 10**6 + 1)
    rep = hl.verify_half_bound(L, SPEC, [L.inverse((p, q))])
    assert rep.excursions == 1 and rep.passed
    assert rep.literal_entries == 0


def test_mirror_symmetry():
    samples = hl.sample_entries(SPEC, 50, seed=5)
    a = hl.verify_half_bound(L, SPEC, samples)
    b = hl.verify_half_bound(L, SPEC, [hl.mirror(z) for z in samples], sector=3)
    assert a.max_ratio == b.max_ratio and a.excursions == b.excursions == 50


def test_dropping_the_band_breaks_the_bound():
    rep = hl.verify_half_bound(L, SPEC, hl.boundary_samples(SPEC, steps=6))
    assert rep.passed
    assert rep.sector_count_max_ratio == 1
    assert rep.sector_count_counterexample is not None


def test_surd_expansion_factor():
    cat = hl.HypLinear.from_matrix(((2, 1), (1, 1)))
    assert cat.lam == QuadSurd(Fraction(3, 2), Fraction(1, 2), 5)
    spec = hl.RegionSpec(cat.lam, Fraction(1, 16))
    w = (Fraction(1, 10), Fraction(1, 1000))
    ex = hl.excursion_stats(cat, spec, cat.inverse(w))
    assert ex is not None and ex.ratio <= Fraction(1, 2)
    with pytest.raises(ValueError):
        hl.sample_entries(spec, 1)


def test_validation():
    with pytest.raises(ValueError):
        hl.HypLinear(1)
    with pytest.raises(ValueError):
        hl.RegionSpec(2, 0)
