from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from carpet import chamanara as ch
from carpet.symbolic import BiSequence, enumerate_eventually_periodic


@st.composite
def points(draw, n=2):
    q = draw(st.integers(1, 40))
    x = Fraction(draw(st.integers(0, q)), q)
    y = Fraction(draw(st.integers(0, q)), q)
    return ch.canonicalize(x, y, n)


def test_corners_collapse_to_the_singular_class():
    for n in (2, 3):
        for x, y in [(0, 0), (1, 1), (0, 1), (1, 0), (0, Fraction(1, n)), (Fraction(1, n**2), 0)]:
            assert ch.canonicalize(x, y, n).is_singular


def test_side_identifications():
    z = ch.canonicalize(0, Fraction(3, 4), 2)
    assert (z.kind, z.k) == (ch.SIDE_I, 1)
    assert ch.canonicalize(1, Fraction(1, 4), 2) == z
    assert set(ch.class_members(z)) == {(Fraction(0), Fraction(3, 4)), (Fraction(1), Fraction(1, 4))}
    w = ch.canonicalize(Fraction(3, 4), 0, 2)
    assert (w.kind, w.k) == (ch.SIDE_J, 1)


@given(points())
def test_baker_is_invertible(z):
    assert ch.baker(ch.baker(z), "inverse") == z
    assert ch.baker(ch.baker(z, "inverse")) == z


@given(points(n=3))
def test_baker_well_defined_on_classes(z):
    ok, bad = ch.baker_well_defined(z)
    assert ok, bad


def test_semiconjugacy_sweep_small():
    r = ch.exhaustive_semiconjugacy(2, 6)
    assert not r["failures"]
    assert r["checked"] == sum(1 for _ in enumerate_eventually_periodic(2, 6))


def test_factor_map_on_examples():
    s = BiSequence.parse("(0)1;1(0)_2")
    assert ch.factor_map(s) == ch.canonicalize(Fraction(1, 2), Fraction(1, 2), 2)
    assert ch.factor_map(BiSequence.constant(2, 0)).is_singular
    assert ch.check_semiconjugacy(s).ok
    assert ch.factor_map(ch.factor_preimage(ch.canonicalize(Fraction(1, 3), Fraction(1, 5), 2))) == ch.canonicalize(
        Fraction(1, 3), Fraction(1, 5), 2
    )


def test_distances():
    z = ch.canonicalize(Fraction(1, 2), Fraction(1, 2), 2)
    assert ch.squared_distance(z, ch.canonicalize(Fraction(1, 2), Fraction(3, 5), 2)) == Fraction(1, 100)
    # nearest singular representative of (1/100, 1/100) is (0, 1/128)
    near = ch.canonicalize(Fraction(1, 100), Fraction(1, 100), 2)
    assert ch.squared_distance(near, ch.singular(2)) == Fraction(1, 10**4) + (Fraction(1, 100) - Fraction(1, 128)) ** 2
    assert ch.squared_distance(ch.canonicalize(0, Fraction(1, 4), 2), ch.singular(2)) == 0


def test_density_witness_is_periodic_and_close():
    z = ch.canonicalize(Fraction(1, 2), Fraction(1, 2), 2)
    w = ch.periodic_density_witness(z, Fraction(1, 16))
    assert ch.baker_iter(w.witness, w.period) == w.witness
    assert w.squared_distance < Fraction(1, 256)
    with pytest.raises(ValueError):
        ch.periodic_density_witness(z, 0)


def test_parse_point():
    assert ch.parse_point("0.1_2, 1/3", 2) == ch.canonicalize(Fraction(1, 2), Fraction(1, 3), 2)
    with pytest.raises(ValueError):
        ch.parse_point("1/2", 2)
