from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from carpet.symbolic import (
    BiSequence,
    ProbabilityVector,
    canonical_side,
    count_eventually_periodic,
    cylinder_measure,
    dist,
    enumerate_eventually_periodic,
    enumerate_periodic,
    shift,
    shift_by,
    unshift,
)

digit_lists = st.lists(st.integers(0, 2), max_size=4)


@st.composite
def bisequences(draw):
    def side():
        return draw(digit_lists), draw(st.lists(st.integers(0, 2), min_size=1, max_size=3))

    (lp, lq), (rp, rq) = side(), side()
    return BiSequence.make(3, lp, lq, rp, rq)


# n=2,3,4 at total length <= 8, counted independently by brute force
# over all (pre, per) strings followed by canonical deduplication.
@pytest.mark.parametrize("n, count", [(2, 9000), (3, 333693), (4, 3871648)])
def test_enumeration_counts(n, count):
    assert count_eventually_periodic(n, 8) == count


def test_enumeration_matches_count_and_is_distinct():
    seqs = list(enumerate_eventually_periodic(2, 6))
    assert len(seqs) == count_eventually_periodic(2, 6)
    assert len(set(seqs)) == len(seqs)


def test_canonical_side_rolls_period():
    assert canonical_side([0, 1, 1], [1]) == ((0,), (1,))
    assert canonical_side([1], [0, 1]) == ((), (1, 0))
    assert canonical_side([], [0, 0]) == ((), (0,))


def test_parse_and_indexing():
    s = BiSequence.parse("(01)1;0(1)_2")
    assert s.right(4) == [0, 1, 1, 1]
    assert s.left(5) == [1, 1, 0, 1, 0]
    assert str(s) == "(01)1;0(1)_2"
    assert BiSequence.from_json(s.to_json()) == s


@given(bisequences())
def test_shift_inverse(s):
    assert unshift(shift(s)) == s
    assert shift(unshift(s)) == s
    assert shift_by(s, 3) == shift(shift(shift(s)))
    assert shift_by(shift_by(s, 2), -2) == s


@given(bisequences())
def test_shift_moves_indices(s):
    t = shift(s)
    for i in range(-6, 7):
        assert t[i] == s[i + 1]


@given(bisequences(), bisequences())
def test_metric(s, t):
    d = dist(s, t)
    assert d == dist(t, s)
    assert (d == 0) == (s == t)
    if d:
        k = -d.numerator.bit_length() + d.denominator.bit_length()
        assert d == Fraction(1, 2**k)
        assert all(s[i] == t[i] for i in range(-k + 1, k + 1))


def test_periodic_points_are_fixed():
    pts = enumerate_periodic(2, 4)
    assert len(pts) == 16
    assert all(shift_by(p, 4) == p for p in pts)
    with pytest.raises(ValueError):
        enumerate_periodic(2, 30)


def test_cylinders():
    P = ProbabilityVector.parse("1/4, 3/4")
    assert cylinder_measure(P, [1, 1, 0]) == Fraction(9, 64)
    with pytest.raises(ValueError):
        ProbabilityVector.parse("1/2, 1/3")
    with pytest.raises(ValueError):
        ProbabilityVector((Fraction(3, 2), Fraction(-1, 2)))
