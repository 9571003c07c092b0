from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from carpet.digits import DigitNumber, digit_transform, from_rational, prepend_digits, shift_digits

bases = st.integers(2, 7)


@st.composite
def rationals(draw):
    q = draw(st.integers(1, 200))
    return Fraction(draw(st.integers(0, q)), q)


def test_one_third_in_base_two():
    x = from_rational(1, 3, 2)
    assert (x.preperiod, x.period) == ((), (0, 1))
    assert str(x) == "0.(01)_2"


def test_terminating_expansions_are_canonical():
    assert DigitNumber.parse("0.1_2").period == (0,)
    # 0.0(1) names the same number as 0.1 and normalizes to it
    assert DigitNumber.parse("0.0(1)_2") == DigitNumber.parse("0.1_2")
    assert DigitNumber.parse("0.1_2").nonterminating() == ((0,), (1,))


def test_one_keeps_its_all_top_digit_form():
    assert DigitNumber.one(3) == DigitNumber.parse("0.(2)_3")
    assert DigitNumber.one(3).value() == 1
    assert DigitNumber.one(3).is_unit


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        DigitNumber(2, (2,), (0,))
    with pytest.raises(ValueError):
        DigitNumber(2, (), (0, 1, 0, 1))
    with pytest.raises(ValueError):
        from_rational(3, 2, 10)
    with pytest.raises(ValueError):
        DigitNumber.parse("1.5")
    with pytest.raises(IndexError):
        DigitNumber.zero(2).digit(0)


@given(rationals(), bases)
def test_round_trip(v, n):
    x = DigitNumber.from_fraction(v, n)
    assert x.value() == v
    assert DigitNumber.parse(str(x)) == x
    assert DigitNumber.from_json(x.to_json()) == x


@given(rationals(), bases, st.integers(0, 5))
def test_shift_multiplies_by_base(v, n, k):
    x = DigitNumber.from_fraction(v, n)
    y = shift_digits(x, k)
    expected = v * n**k - int(v * n**k)
    if v == 1:
        expected = Fraction(1)
    assert y.value() == expected


@given(rationals(), bases, st.lists(st.integers(0, 6), max_size=4))
def test_prepend_inverts_shift(v, n, ds):
    ds = [d % n for d in ds]
    x = DigitNumber.from_fraction(v, n)
    y = prepend_digits(x, ds)
    head = sum(d * n ** (len(ds) - i) for i, d in enumerate(ds, 1))
    assert y.value() == (head + v) / n ** len(ds)
    if v < 1:
        assert shift_digits(y, len(ds)) == x


@given(rationals(), bases)
def test_complement_reflects(v, n):
    x = DigitNumber.from_fraction(v, n)
    assert digit_transform(x, "complement_all").value() == 1 - v


def test_first_digit_moves():
    x = DigitNumber.parse("0.12_3")
    assert digit_transform(x, "decrement_first").value() == x.value() - Fraction(1, 3)
    assert digit_transform(x, "increment_first").value() == x.value() + Fraction(1, 3)
    with pytest.raises(ValueError):
        digit_transform(DigitNumber.parse("0.2_3"), "increment_first")


def test_digit_transform_unknown_kind():
    with pytest.raises(ValueError):
        digit_transform(DigitNumber.zero(2), "bogus")
