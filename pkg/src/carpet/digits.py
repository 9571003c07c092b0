"""Exact eventually periodic base-n expansions of numbers in [0, 1].

A :class:`DigitNumber` stores ``0.a_1a_2..._n`` as a finite preperiod and a
repeating period.  Instances are always canonical: the period is primitive,
the preperiod is as short as possible, and an all-(n-1) tail is rewritten to
the terminating form.  The single exception is the unit ``1``, stored as
``0.(n-1)_n`` with an empty preperiod and reachable only through
:meth:`DigitNumber.one` or arithmetic that lands exactly on 1.

The twin expansion of a terminating number (``0.1(0)_2`` versus
``0.0(1)_2``) is available through :meth:`DigitNumber.nonterminating`;
the transforms below accept ``view="nonterminating"`` to act on it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

_DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"

TRANSFORMS = ("decrement_first", "increment_first", "complement_all", "complement_from")


def _word_value(digits: Sequence[int], base: int) -> int:
    v = 0
    for d in digits:
        v = v * base + d
    return v


def expansion_value(base: int, preperiod: Sequence[int], period: Sequence[int]) -> Fraction:
    """Exact value of ``0.pre(per)`` in the given base, canonical or not."""
    a, b = len(preperiod), len(period)
    if b == 0:
        return Fraction(_word_value(preperiod, base), base**a)
    rep = base**b - 1
    num = _word_value(preperiod, base) * rep + _word_value(period, base)
    return Fraction(num, base**a * rep)


def _primitive(period: tuple[int, ...]) -> tuple[int, ...]:
    b = len(period)
    for d in range(1, b):
        if b % d == 0 and period[:d] * (b // d) == period:
            return period[:d]
    return period


def _is_canonical(base: int, pre: tuple[int, ...], per: tuple[int, ...]) -> bool:
    if not per or _primitive(per) != per:
        return False
    if pre and pre[-1] == per[-1]:
        return False
    if per == (base - 1,):
        return not pre
    return True


@dataclass(frozen=True)
class DigitNumber:
    base: int
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        object.__setattr__(self, "preperiod", tuple(int(d) for d in self.preperiod))
        object.__setattr__(self, "period", tuple(int(d) for d in self.period))
        for d in self.preperiod + self.period:
            if not 0 <= d < self.base:
                raise ValueError(f"digit {d} out of range for base {self.base}")
        if not _is_canonical(self.base, self.preperiod, self.period):
            raise ValueError(
                f"non-canonical expansion {self.preperiod}({self.period}) in base {self.base}; "
                "use DigitNumber.from_digits to normalize"
            )

    # -- constructors -------------------------------------------------

    @classmethod
    def from_digits(cls, base: int, preperiod: Sequence[int], period: Sequence[int]) -> "DigitNumber":
        """Normalize an arbitrary eventually periodic digit string."""
        if base < 2:
            raise ValueError(f"base must be >= 2, got {base}")
        if not period:
            period = (0,)
        for d in tuple(preperiod) + tuple(period):
            if not 0 <= d < base:
                raise ValueError(f"digit {d} out of range for base {base}")
        v = expansion_value(base, preperiod, period)
        return cls.from_fraction(v, base)

    @classmethod
    def from_fraction(cls, value: Fraction, base: int) -> "DigitNumber":
        value = Fraction(value)
        return from_rational(value.numerator, value.denominator, base)

    @classmethod
    def one(cls, base: int) -> "DigitNumber":
        return cls(base, (), (base - 1,))

    @classmethod
    def zero(cls, base: int) -> "DigitNumber":
        return cls(base, (), (0,))

    @classmethod
    def parse(cls, text: str) -> "DigitNumber":
        """Parse ``0.d1d2(p1p2)_n``; a missing period means a terminating expansion.

        The parser accepts non-canonical strings such as ``0.(1)_2`` and
        normalizes them.
        """
        m = re.fullmatch(r"\s*0?\.([0-9a-z]*)(?:\(([0-9a-z]+)\))?_(\d+)\s*", text)
        if m is None:
            raise ValueError(f"cannot parse digit expansion {text!r}")
        base = int(m.group(3))
        pre = [_DIGIT_CHARS.index(c) for c in m.group(1)]
        per = [_DIGIT_CHARS.index(c) for c in (m.group(2) or "0")]
        return cls.from_digits(base, pre, per)

    # -- views ----------------------------------------------------------

    @property
    def is_unit(self) -> bool:
        return not self.preperiod and self.period == (self.base - 1,)

    @property
    def is_terminating(self) -> bool:
        return self.period == (0,)

    def value(self) -> Fraction:
        return expansion_value(self.base, self.preperiod, self.period)

    def digit(self, i: int) -> int:
        """The i-th digit after the point, 1-indexed."""
        if i < 1:
            raise IndexError("digits are 1-indexed")
        a = len(self.preperiod)
        if i <= a:
            return self.preperiod[i - 1]
        return self.period[(i - a - 1) % len(self.period)]

    def digits(self, count: int) -> list[int]:
        return [self.digit(i) for i in range(1, count + 1)]

    def nonterminating(self) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        """The all-(n-1)-tail twin of a terminating nonzero expansion, else None."""
        if not self.is_terminating or not self.preperiod:
            return None
        pre = list(self.preperiod)
        pre[-1] -= 1
        return tuple(pre), (self.base - 1,)

    def view(self, which: str = "canonical") -> tuple[tuple[int, ...], tuple[int, ...]]:
        if which == "canonical":
            return self.preperiod, self.period
        if which == "nonterminating":
            twin = self.nonterminating()
            if twin is None:
                raise ValueError(f"{self} has no non-terminating twin")
            return twin
        raise ValueError(f"unknown view {which!r}")

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        return {"base": self.base, "preperiod": list(self.preperiod), "period": list(self.period)}

    @classmethod
    def from_json(cls, data: dict) -> "DigitNumber":
        return cls(int(data["base"]), tuple(data["preperiod"]), tuple(data["period"]))

    def __str__(self) -> str:
        pre = "".join(_DIGIT_CHARS[d] for d in self.preperiod)
        per = "".join(_DIGIT_CHARS[d] for d in self.period)
        return f"0.{pre}({per})_{self.base}"


def from_rational(p: int, q: int, base: int) -> DigitNumber:
    """Expand p/q in the given base by long division."""
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if q <= 0:
        raise ValueError("denominator must be positive")
    if not 0 <= p <= q:
        raise ValueError(f"{p}/{q} is not in [0, 1]")
    if p == q:
        return DigitNumber.one(base)
    g = gcd(p, q)
    p, q = p // g, q // g
    digits: list[int] = []
    seen: dict[int, int] = {}
    r = p
    while r not in seen:
        seen[r] = len(digits)
        d, r = divmod(r * base, q)
        digits.append(d)
    start = seen[r]
    return DigitNumber(base, tuple(digits[:start]), tuple(digits[start:]))


def to_rational(x: DigitNumber) -> Fraction:
    return x.value()


def _apply(digits_pre: tuple[int, ...], digits_per: tuple[int, ...], positions, fn, base):
    """Apply ``fn`` to the digits at 1-indexed ``positions`` (a predicate).

    Callers unroll the period first so the predicate is constant on it.
    """
    pre = list(digits_pre)
    per = list(digits_per)
    out_pre = [fn(d) if positions(i + 1) else d for i, d in enumerate(pre)]
    out_per = []
    for j, d in enumerate(per):
        idx = len(pre) + j + 1
        out_per.append(fn(d) if positions(idx) else d)
    for d in out_pre + out_per:
        if not 0 <= d < base:
            raise ValueError("transform inapplicable to this class")
    return out_pre, out_per


def _unrolled(x: DigitNumber, view: str, min_pre: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    pre, per = x.view(view)
    pre, per = list(pre), list(per)
    while len(pre) < min_pre:
        pre.append(per[0])
        per = per[1:] + per[:1]
    return tuple(pre), tuple(per)


def digit_transform(x: DigitNumber, kind: str, k: int = 1, view: str = "canonical") -> DigitNumber:
    """Digit-wise a-, a+ and a* transforms.

    ``decrement_first`` / ``increment_first`` change the first digit by one;
    ``complement_all`` maps every digit a to (n-1)-a; ``complement_from``
    does the same from the k-th digit on.  ``view`` chooses which of the two
    expansions of a terminating number is transformed.
    """
    n = x.base
    if kind == "decrement_first":
        pre, per = _unrolled(x, view, 1)
        out = _apply(pre, per, lambda i: i == 1, lambda d: d - 1, n)
    elif kind == "increment_first":
        pre, per = _unrolled(x, view, 1)
        out = _apply(pre, per, lambda i: i == 1, lambda d: d + 1, n)
    elif kind == "complement_all":
        pre, per = x.view(view)
        out = _apply(pre, per, lambda i: True, lambda d: n - 1 - d, n)
    elif kind == "complement_from":
        if k < 1:
            raise ValueError("complement_from needs k >= 1")
        pre, per = _unrolled(x, view, k - 1)
        out = _apply(pre, per, lambda i: i >= k, lambda d: n - 1 - d, n)
    else:
        raise ValueError(f"unknown transform {kind!r}; expected one of {TRANSFORMS}")
    return DigitNumber.from_digits(n, *out)


def shift_digits(x: DigitNumber, k: int) -> DigitNumber:
    """Shift the expansion by k places.

    k > 0 drops the first k digits (value n^k x minus the dropped integer
    part); k < 0 prepends |k| zeros (value x / n^|k|).  Dropping digits of
    the unit ``0.(n-1)`` leaves the unit.
    """
    if k >= 0:
        pre, per = list(x.preperiod), list(x.period)
        for _ in range(k):
            if pre:
                pre.pop(0)
            else:
                per = per[1:] + per[:1]
        if not pre and per == [x.base - 1]:
            return DigitNumber.one(x.base)
        return DigitNumber.from_digits(x.base, pre, per)
    return prepend_digits(x, [0] * (-k))


def prepend_digits(x: DigitNumber, digits: Sequence[int]) -> DigitNumber:
    """Inverse of a left shift that dropped ``digits``."""
    pre, per = x.view("canonical")
    return DigitNumber.from_digits(x.base, tuple(digits) + pre, per)
