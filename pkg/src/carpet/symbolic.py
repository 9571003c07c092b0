"""The full shift on n symbols restricted to eventually periodic points."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import mpmath

from .digits import _DIGIT_CHARS, _primitive

DEFAULT_ENUM_CAP = 10**7


def canonical_side(pre: Sequence[int], per: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Canonical (preperiod, period) for a one-sided sequence pre + per + per + ...

    Unlike digit expansions there is no value identification here: 0(1) and
    1(0) are different sequences.
    """
    pre, per = list(pre), _primitive(tuple(per))
    if not per:
        raise ValueError("period must be non-empty")
    per = list(per)
    while pre and pre[-1] == per[-1]:
        pre.pop()
        per = per[-1:] + per[:-1]
    return tuple(pre), tuple(per)


def _side_digit(pre: tuple[int, ...], per: tuple[int, ...], i: int) -> int:
    if i <= len(pre):
        return pre[i - 1]
    return per[(i - len(pre) - 1) % len(per)]


@dataclass(frozen=True)
class BiSequence:
    """(... b2 b1 ; a1 a2 ...): index i >= 1 holds a_i, index i <= 0 holds b_{1-i}.

    Left digits are stored outward from index 0.
    """

    base: int
    left_pre: tuple[int, ...]
    left_per: tuple[int, ...]
    right_pre: tuple[int, ...]
    right_per: tuple[int, ...]

    def __post_init__(self):
        for d in self.left_pre + self.left_per + self.right_pre + self.right_per:
            if not 0 <= d < self.base:
                raise ValueError(f"digit {d} out of range for base {self.base}")
        if canonical_side(self.left_pre, self.left_per) != (self.left_pre, self.left_per) or canonical_side(
            self.right_pre, self.right_per
        ) != (self.right_pre, self.right_per):
            raise ValueError("non-canonical BiSequence; use BiSequence.make")

    @classmethod
    def make(cls, base, left_pre, left_per, right_pre, right_per) -> "BiSequence":
        lp, lq = canonical_side(left_pre, left_per)
        rp, rq = canonical_side(right_pre, right_per)
        return cls(base, lp, lq, rp, rq)

    @classmethod
    def constant(cls, base: int, digit: int) -> "BiSequence":
        return cls(base, (), (digit,), (), (digit,))

    @classmethod
    def periodic(cls, base: int, word: Sequence[int]) -> "BiSequence":
        """The sequence with s_i = word[(i-1) mod p]."""
        word = tuple(word)
        return cls.make(base, (), word[::-1], (), word)

    def __getitem__(self, i: int) -> int:
        if i >= 1:
            return _side_digit(self.right_pre, self.right_per, i)
        return _side_digit(self.left_pre, self.left_per, 1 - i)

    def right(self, count: int) -> list[int]:
        return [self[i] for i in range(1, count + 1)]

    def left(self, count: int) -> list[int]:
        return [self[1 - j] for j in range(1, count + 1)]

    @property
    def description_length(self) -> int:
        return len(self.left_pre) + len(self.left_per) + len(self.right_pre) + len(self.right_per)

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "left_preperiod": list(self.left_pre),
            "left_period": list(self.left_per),
            "right_preperiod": list(self.right_pre),
            "right_period": list(self.right_per),
        }

    @classmethod
    def from_json(cls, data: dict) -> "BiSequence":
        return cls.make(
            int(data["base"]),
            data["left_preperiod"],
            data["left_period"],
            data["right_preperiod"],
            data["right_period"],
        )

    def __str__(self) -> str:
        def w(ds):
            return "".join(_DIGIT_CHARS[d] for d in ds)

        return (
            f"({w(self.left_per[::-1])}){w(self.left_pre[::-1])};"
            f"{w(self.right_pre)}({w(self.right_per)})_{self.base}"
        )

    @classmethod
    def parse(cls, text: str) -> "BiSequence":
        """Parse ``(L)l;r(R)_n`` where the left side is written as it appears on the page."""
        m = re.fullmatch(
            r"\s*\.*\(([0-9a-z]+)\)([0-9a-z]*)\s*;\s*([0-9a-z]*)\(([0-9a-z]+)\)\.*_(\d+)\s*",
            text,
        )
        if m is None:
            raise ValueError(f"cannot parse bisequence {text!r}")

        def ds(s):
            return [_DIGIT_CHARS.index(c) for c in s]

        lper, lpre, rpre, rper = (ds(m.group(i)) for i in range(1, 5))
        return cls.make(int(m.group(5)), lpre[::-1], lper[::-1], rpre, rper)


def shift(s: BiSequence) -> BiSequence:
    """Left shift: output index i holds input index i+1."""
    a1 = s[1]
    if s.right_pre:
        rpre, rper = s.right_pre[1:], s.right_per
    else:
        rpre, rper = (), s.right_per[1:] + s.right_per[:1]
    if not s.left_pre and s.left_per[-1] == a1:
        lpre, lper = (), (a1,) + s.left_per[:-1]
    else:
        lpre, lper = (a1,) + s.left_pre, s.left_per
    return BiSequence(s.base, lpre, lper, rpre, _primitive(rper))


def unshift(s: BiSequence) -> BiSequence:
    """Inverse of :func:`shift`."""
    b1 = s[0]
    if s.left_pre:
        lpre, lper = s.left_pre[1:], s.left_per
    else:
        lpre, lper = (), s.left_per[1:] + s.left_per[:1]
    if not s.right_pre and s.right_per[-1] == b1:
        rpre, rper = (), (b1,) + s.right_per[:-1]
    else:
        rpre, rper = (b1,) + s.right_pre, s.right_per
    return BiSequence(s.base, lpre, _primitive(lper), rpre, rper)


def shift_by(s: BiSequence, k: int) -> BiSequence:
    step = shift if k >= 0 else unshift
    for _ in range(abs(k)):
        s = step(s)
    return s


def _first_mismatch(p1, q1, p2, q2) -> int | None:
    if (p1, q1) == (p2, q2):
        return None
    # two eventually periodic sequences that agree this long agree forever
    bound = max(len(p1), len(p2)) + len(q1) * len(q2)
    for i in range(1, bound + 1):
        if _side_digit(p1, q1, i) != _side_digit(p2, q2, i):
            return i
    return None


def dist(s: BiSequence, t: BiSequence) -> Fraction:
    """2^-k with k the largest m such that s and t agree on indices -m < i <= m."""
    if s.base != t.base:
        raise ValueError("base mismatch")
    mr = _first_mismatch(s.right_pre, s.right_per, t.right_pre, t.right_per)
    ml = _first_mismatch(s.left_pre, s.left_per, t.left_pre, t.left_per)
    if mr is None and ml is None:
        return Fraction(0)
    k = min(m for m in (mr, ml) if m is not None) - 1
    return Fraction(1, 2**k)


@dataclass(frozen=True)
class ProbabilityVector:
    entries: tuple

    def __post_init__(self):
        ents = tuple(e if isinstance(e, (Fraction, mpmath.mpf)) else Fraction(e) for e in self.entries)
        object.__setattr__(self, "entries", ents)
        if not ents:
            raise ValueError("empty probability vector")
        if any(e < 0 for e in ents):
            raise ValueError("negative probability")
        total = sum(ents)
        if all(isinstance(e, Fraction) for e in ents):
            if total != 1:
                raise ValueError(f"entries sum to {total}, not 1")
        elif abs(total - 1) > mpmath.mpf(2) ** (-100):
            raise ValueError(f"entries sum to {total}, not 1")

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @classmethod
    def parse(cls, text: str) -> "ProbabilityVector":
        return cls(tuple(Fraction(part.strip()) for part in text.split(",")))


def cylinder_measure(P: ProbabilityVector, word: Sequence[int]):
    """Bernoulli measure of a cylinder: the product of p_digit over the block."""
    out = Fraction(1)
    for d in word:
        out = out * P[d]
    return out


def enumerate_periodic(n: int, p: int, cap: int = DEFAULT_ENUM_CAP) -> list[BiSequence]:
    """All n^p sequences fixed by shift^p."""
    if p < 1:
        raise ValueError("period must be >= 1")
    if n**p > cap:
        raise ValueError(f"{n}^{p} sequences exceed the enumeration cap {cap}")
    return [BiSequence.periodic(n, w) for w in itertools.product(range(n), repeat=p)]


def canonical_sides(n: int, length: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Canonical one-sided (pre, per) pairs with len(pre) + len(per) == length."""
    for b in range(1, length + 1):
        a = length - b
        for per in itertools.product(range(n), repeat=b):
            if _primitive(per) != per:
                continue
            for pre in itertools.product(range(n), repeat=a):
                if pre and pre[-1] == per[-1]:
                    continue
                yield pre, per


def enumerate_eventually_periodic(n: int, max_length: int) -> Iterator[BiSequence]:
    """Every canonical bisequence whose four digit lists have total length <= max_length."""
    sides = {L: list(canonical_sides(n, L)) for L in range(1, max_length)}
    for left_len in range(1, max_length):
        for right_len in range(1, max_length - left_len + 1):
            for lpre, lper in sides[left_len]:
                for rpre, rper in sides[right_len]:
                    yield BiSequence(n, lpre, lper, rpre, rper)


def count_eventually_periodic(n: int, max_length: int) -> int:
    counts = {L: sum(1 for _ in canonical_sides(n, L)) for L in range(1, max_length)}
    return sum(
        counts[a] * counts[b] for a in range(1, max_length) for b in range(1, max_length - a + 1)
    )
