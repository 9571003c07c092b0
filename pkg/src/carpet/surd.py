"""Exact arithmetic in Q(sqrt(d)) for eigenvalue and eigenvector data."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class QuadSurd:
    """The number a + b*sqrt(d) with rational a, b and square-free d > 1."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        r = isqrt(self.d)
        if self.d < 2 or r * r == self.d:
            raise ValueError(f"d={self.d} must be a positive non-square")

    def _lift(self, other) -> "QuadSurd":
        if isinstance(other, QuadSurd):
            if other.d != self.d:
                raise ValueError("mixing different quadratic fields")
            return other
        return QuadSurd(Fraction(other), Fraction(0), self.d)

    def __add__(self, other):
        o = self._lift(other)
        return QuadSurd(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return QuadSurd(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadSurd":
        return QuadSurd(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def __truediv__(self, other):
        o = self._lift(other)
        nrm = o.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero surd")
        num = self * o.conjugate()
        return QuadSurd(num.a / nrm, num.b / nrm, self.d)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (1 / self) ** (-k)
        out, base = QuadSurd(1, 0, self.d), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def sign(self) -> int:
        """Exact sign, decided by comparing a^2 with d*b^2."""
        sa, sb = _sign(self.a), _sign(self.b)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        diff = self.a * self.a - self.d * self.b * self.b
        return sa if diff > 0 else sb if diff < 0 else 0

    def __eq__(self, other):
        try:
            return (self - other).sign() == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.a) + float(self.b) * self.d**0.5

    def to_mpf(self, dps: int = 50):
        with mpmath.workdps(dps):
            return mpmath.mpf(self.a.numerator) / self.a.denominator + (
                mpmath.mpf(self.b.numerator) / self.b.denominator
            ) * mpmath.sqrt(self.d)

    def __repr__(self):
        return f"QuadSurd({self.a} + {self.b}*sqrt({self.d}))"
