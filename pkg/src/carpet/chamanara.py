"""The n-Chamanara surface, its baker map B_n and the symbolic factor map P_n.

Points of C_n are equivalence classes of the closed unit square.  The left
side segment I_k = {0} x (n^-k, n^-(k-1)) is glued by a translation to a
segment on the right side, and the bottom segment J_k likewise to a top
segment.  Every corner and every endpoint of these segments collapses to
one singular class.

A class is stored by a canonical representative in [0, 1)^2: interior
points as themselves, side classes by their member with x = 0 (I_k) or
y = 0 (J_k), the singular class by a sentinel.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd
from typing import Iterable

from .digits import DigitNumber, expansion_value
from .symbolic import BiSequence, shift

INTERIOR, SIDE_I, SIDE_J, SINGULAR = "interior", "side_I", "side_J", "singular"

_ZERO, _ONE = Fraction(0), Fraction(1)


@dataclass(frozen=True)
class CnPoint:
    base: int
    kind: str
    k: int
    x: Fraction
    y: Fraction

    @property
    def key(self) -> tuple:
        """Integer key (kind, k, xp, xq, yp, yq) used by the fast kernels."""
        return (self.kind, self.k, self.x.numerator, self.x.denominator, self.y.numerator, self.y.denominator)

    @classmethod
    def from_key(cls, n: int, key: tuple) -> "CnPoint":
        kind, k, xp, xq, yp, yq = key
        return cls(n, kind, k, Fraction(xp, xq), Fraction(yp, yq))

    @property
    def x_digits(self) -> DigitNumber:
        return DigitNumber.from_fraction(self.x, self.base)

    @property
    def y_digits(self) -> DigitNumber:
        return DigitNumber.from_fraction(self.y, self.base)

    @property
    def is_singular(self) -> bool:
        return self.kind == SINGULAR

    def to_json(self) -> dict:
        return {"base": self.base, "kind": self.kind, "k": self.k, "x": str(self.x), "y": str(self.y)}

    def __str__(self) -> str:
        if self.kind == SINGULAR:
            return f"[singular]_{self.base}"
        label = self.kind if self.kind == INTERIOR else f"{self.kind}({self.k})"
        return f"[({self.x}, {self.y}) {label}]_{self.base}"


def singular(n: int) -> CnPoint:
    return CnPoint(n, SINGULAR, 0, _ZERO, _ZERO)


# The kernels below work on reduced integer pairs p/q; they sit on the hot
# path of the exhaustive suites, where Fraction arithmetic is too slow.

_SING_KEY = (SINGULAR, 0, 0, 1, 0, 1)


def _is_inv_power(p: int, q: int, n: int) -> bool:
    """p/q == n^-k for some k >= 1."""
    if p != 1 or q < n:
        return False
    while q % n == 0:
        q //= n
    return q == 1


def _level(p: int, q: int, n: int) -> int:
    """The k with n^-k < p/q < n^-(k-1)."""
    k, nk = 1, n
    while p * nk <= q:
        k += 1
        nk *= n
    return k


def _translate(p: int, q: int, k: int, n: int) -> tuple[int, int]:
    """p/q - (1 - n^-(k-1) - n^-k), reduced."""
    nk = n**k
    num = p * nk - q * nk + (n + 1) * q
    den = q * nk
    g = gcd(num, den)
    return num // g, den // g


def _offset(k: int, n: int) -> Fraction:
    """Translation length 1 - n^-(k-1) - n^-k between a segment and its partner."""
    return 1 - Fraction(1, n ** (k - 1)) - Fraction(1, n**k)


def ikey(n: int, xp: int, xq: int, yp: int, yq: int) -> tuple:
    """Class key of (xp/xq, yp/yq) in the closed square; inputs reduced."""
    if 0 < xp < xq:
        if 0 < yp < yq:
            return (INTERIOR, 0, xp, xq, yp, yq)
        if yp == 0:
            tp = xp
        else:
            tp = xq - xp
        if _is_inv_power(tp, xq, n):
            return _SING_KEY
        k = _level(tp, xq, n)
        if yp == 0:
            return (SIDE_J, k, xp, xq, 0, 1)
        return (SIDE_J, k, *_translate(xp, xq, k, n), 0, 1)
    if not 0 < yp < yq:
        return _SING_KEY
    tp = yp if xp == 0 else yq - yp
    if _is_inv_power(tp, yq, n):
        return _SING_KEY
    k = _level(tp, yq, n)
    if xp == 0:
        return (SIDE_I, k, 0, 1, yp, yq)
    return (SIDE_I, k, 0, 1, *_translate(yp, yq, k, n))


def canonical_key(n: int, x: Fraction, y: Fraction) -> tuple:
    return ikey(n, x.numerator, x.denominator, y.numerator, y.denominator)


def canonicalize(x, y, n: int | None = None) -> CnPoint:
    """Canonical class of (x, y); accepts DigitNumbers or rationals with ``n``."""
    if isinstance(x, DigitNumber):
        n = x.base
        x = x.value()
    if isinstance(y, DigitNumber):
        if n is not None and y.base != n:
            raise ValueError("base mismatch")
        n = y.base
        y = y.value()
    if n is None:
        raise ValueError("base required for rational coordinates")
    x, y = Fraction(x), Fraction(y)
    if not (0 <= x <= 1 and 0 <= y <= 1):
        raise ValueError(f"({x}, {y}) is outside the unit square")
    return CnPoint.from_key(n, canonical_key(n, x, y))


def _singular_members(n: int, limit: int):
    fixed = [(_ZERO, _ZERO), (_ONE, _ONE), (_ONE, _ZERO), (_ZERO, _ONE)]
    out = fixed[:limit]
    k = 1
    while len(out) < limit:
        t = Fraction(1, n**k)
        for m in ((_ZERO, t), (t, _ZERO), (_ONE, 1 - t), (1 - t, _ONE)):
            if len(out) < limit:
                out.append(m)
        k += 1
    return out


def class_members(z: CnPoint, limit: int = 12) -> list[tuple[Fraction, Fraction]]:
    """Members of a class as rational pairs; the singular class is truncated to ``limit``."""
    n = z.base
    if z.kind == INTERIOR:
        return [(z.x, z.y)]
    if z.kind == SIDE_I:
        return [(_ZERO, z.y), (_ONE, z.y + _offset(z.k, n))]
    if z.kind == SIDE_J:
        return [(z.x, _ZERO), (z.x + _offset(z.k, n), _ONE)]
    return _singular_members(n, limit)


def class_members_digits(z: CnPoint, limit: int = 12) -> list[tuple[DigitNumber, DigitNumber]]:
    n = z.base
    return [(DigitNumber.from_fraction(a, n), DigitNumber.from_fraction(b, n)) for a, b in class_members(z, limit)]


# -- baker map ----------------------------------------------------------


def baker_key(n: int, key: tuple, inverse: bool = False) -> tuple:
    kind, _, xp, xq, yp, yq = key
    if kind == SINGULAR:
        return key
    if inverse:
        j = n * yp // yq
        a, b = xp + j * xq, n * xq
        c = n * yp - j * yq
        g, h = gcd(a, b), gcd(c, yq)
        return ikey(n, a // g, b // g, c // h, yq // h)
    j = n * xp // xq
    a = n * xp - j * xq
    c, d = yp + j * yq, n * yq
    g, h = gcd(a, xq), gcd(c, d)
    return ikey(n, a // g, xq // g, c // h, d // h)


def baker(z: CnPoint, direction: str = "forward") -> CnPoint:
    """B_n(x, y) = (nx - (k-1), (y + k - 1)/n) on the strip (k-1)/n <= x < k/n."""
    if direction not in ("forward", "inverse"):
        raise ValueError(f"unknown direction {direction!r}")
    return CnPoint.from_key(z.base, baker_key(z.base, z.key, direction == "inverse"))


def baker_iter(z: CnPoint, steps: int) -> CnPoint:
    key = z.key
    inverse = steps < 0
    for _ in range(abs(steps)):
        key = baker_key(z.base, key, inverse)
    return CnPoint.from_key(z.base, key)


def orbit(z: CnPoint, steps: int) -> list[CnPoint]:
    out = [z]
    for _ in range(steps):
        out.append(baker(out[-1]))
    return out


def strip_images(n: int, x: Fraction, y: Fraction, inverse: bool = False) -> list[tuple[Fraction, Fraction]]:
    """Images of a square point under every closed-strip branch containing it."""
    if inverse:
        x, y = y, x
    out = []
    for i in range(1, n + 1):
        if Fraction(i - 1, n) <= x <= Fraction(i, n):
            u, v = n * x - (i - 1), (y + i - 1) / n
            out.append((v, u) if inverse else (u, v))
    return out


def baker_well_defined(z: CnPoint, limit: int = 12, direction: str = "forward") -> tuple[bool, list]:
    """Apply the closed-strip branches to every member; all must land in baker(z)."""
    target = baker(z, direction)
    bad = []
    for mx, my in class_members(z, limit):
        for u, v in strip_images(z.base, mx, my, direction == "inverse"):
            img = canonicalize(u, v, z.base)
            if img != target:
                bad.append(((mx, my), (u, v), img))
    return not bad, bad


# -- factor map ------------------------------------------------------------


def factor_map(s: BiSequence) -> CnPoint:
    """P_n(b; a) = class of (0.a1a2..., 0.b1b2...)."""
    n = s.base
    x = expansion_value(n, s.right_pre, s.right_per)
    y = expansion_value(n, s.left_pre, s.left_per)
    return CnPoint.from_key(n, canonical_key(n, x, y))


@dataclass
class SemiconjResult:
    ok: bool
    sequence: BiSequence
    lhs: CnPoint
    rhs: CnPoint

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "sequence": str(self.sequence),
            "factor_of_shift": self.lhs.to_json(),
            "baker_of_factor": self.rhs.to_json(),
        }


def check_semiconjugacy(s: BiSequence) -> SemiconjResult:
    """Compare P_n(shift(s)) with B_n(P_n(s)) as canonical classes."""
    lhs = factor_map(shift(s))
    rhs = baker(factor_map(s))
    return SemiconjResult(lhs == rhs, s, lhs, rhs)


def _side_shift_left(pre, per, digit):
    """Prepend ``digit`` to a one-sided canonical sequence."""
    if not pre and per[-1] == digit:
        return (), (digit,) + per[:-1]
    return (digit,) + pre, per


def _side_drop(pre, per):
    if pre:
        return pre[1:], per
    return (), per[1:] + per[:1]


def exhaustive_semiconjugacy(n: int, max_length: int = 8, stop_after: int = 10) -> dict:
    """Check P_n o shift = B_n o P_n on every canonical bisequence of total length <= max_length.

    Works on digit tuples directly and caches side values, so it visits the
    same sequences as :func:`carpet.symbolic.enumerate_eventually_periodic`
    without building the dataclasses.
    """
    from .symbolic import canonical_sides

    sides = {L: list(canonical_sides(n, L)) for L in range(1, max_length)}
    value = {}
    for group in sides.values():
        for pre, per in group:
            v = expansion_value(n, pre, per)
            value[pre, per] = (v.numerator, v.denominator)

    # right side -> (x, first digit, x of the shifted right side)
    right_info = {}
    for group in sides.values():
        for pre, per in group:
            a1 = pre[0] if pre else per[0]
            dp, dq = _side_drop(pre, per)
            v = expansion_value(n, dp, dq)
            right_info[pre, per] = (value[pre, per], a1, (v.numerator, v.denominator))
    shifted_left = {}

    checked, failures = 0, []
    for left_len in range(1, max_length):
        for right_len in range(1, max_length - left_len + 1):
            for lside in sides[left_len]:
                y = value[lside]
                for rside in sides[right_len]:
                    x, a1, x2 = right_info[rside]
                    key = (lside, a1)
                    y2 = shifted_left.get(key)
                    if y2 is None:
                        v = expansion_value(n, *_side_shift_left(lside[0], lside[1], a1))
                        y2 = shifted_left[key] = (v.numerator, v.denominator)
                    lhs = ikey(n, x2[0], x2[1], y2[0], y2[1])
                    rhs = baker_key(n, ikey(n, x[0], x[1], y[0], y[1]))
                    checked += 1
                    if lhs != rhs and len(failures) < stop_after:
                        s = BiSequence(n, lside[0], lside[1], rside[0], rside[1])
                        failures.append(SemiconjResult(False, s, CnPoint.from_key(n, lhs), CnPoint.from_key(n, rhs)))
    return {"base": n, "max_length": max_length, "checked": checked, "failures": failures}


def factor_preimage(z: CnPoint) -> BiSequence:
    """A bisequence mapped onto z: the digit expansions of the canonical representative."""
    x, y = z.x_digits, z.y_digits
    return BiSequence.make(z.base, y.preperiod, y.period, x.preperiod, x.period)


# -- distance and periodic points -----------------------------------------


def _sq(a: Fraction, b: Fraction, c: Fraction, d: Fraction) -> Fraction:
    return (a - c) ** 2 + (b - d) ** 2


def _singular_sq_dist(n: int, px: Fraction, py: Fraction) -> Fraction:
    best = min(_sq(px, py, cx, cy) for cx in (_ZERO, _ONE) for cy in (_ZERO, _ONE))
    # each family approaches a corner; its distance is convex in the parameter
    for coord in (py, px, 1 - py, 1 - px):
        k = 1
        while True:
            t = Fraction(1, n**k)
            for cand in ((_ZERO, t), (t, _ZERO), (_ONE, 1 - t), (1 - t, _ONE)):
                best = min(best, _sq(px, py, *cand))
            if t < coord or coord == 0 or k > 200:
                break
            k += 1
    return best


def squared_distance(z: CnPoint, w: CnPoint) -> Fraction:
    """Squared d_C: the minimum squared Euclidean distance between class members."""
    if z.base != w.base:
        raise ValueError("base mismatch")
    if z.kind == SINGULAR and w.kind == SINGULAR:
        return _ZERO
    if z.kind == SINGULAR:
        z, w = w, z
    if w.kind == SINGULAR:
        return min(_singular_sq_dist(z.base, mx, my) for mx, my in class_members(z))
    return min(_sq(a, b, c, d) for a, b in class_members(z) for c, d in class_members(w))


def distance(z: CnPoint, w: CnPoint) -> float:
    return float(squared_distance(z, w)) ** 0.5


def periodic_point(n: int, word) -> CnPoint:
    """Factor image of the periodic bisequence generated by ``word``."""
    word = tuple(word)
    return CnPoint.from_key(n, canonical_key(n, expansion_value(n, (), word), expansion_value(n, (), word[::-1])))


def _targeted_words(n: int, z: CnPoint, p: int) -> Iterable[tuple[int, ...]]:
    """Words whose periodic point matches a member of z on about p digits in total.

    A word x_1..x_a y_{p-a}..y_1 gives right digits starting x_1..x_a and
    left digits starting y_1..y_{p-a}.
    """
    for mx, my in class_members(z):
        for a in range(p, -1, -1):
            b = p - a
            xs = _prefix_choices(mx, n, a)
            ys = _prefix_choices(my, n, b)
            for xw in xs:
                for yw in ys:
                    yield xw + yw[::-1]


def _prefix_choices(t: Fraction, n: int, length: int) -> list[tuple[int, ...]]:
    if length == 0:
        return [()]
    top = n**length
    base = min(floor(t * top), top - 1)
    out = []
    for v in (base, base - 1, base + 1):
        if 0 <= v < top:
            digits = []
            for _ in range(length):
                v, d = divmod(v, n)
                digits.append(d)
            out.append(tuple(reversed(digits)))
    return out


@dataclass
class DensityWitness:
    center: CnPoint
    witness: CnPoint
    period: int
    word: tuple[int, ...]
    squared_distance: Fraction

    def to_json(self) -> dict:
        return {
            "center": self.center.to_json(),
            "witness": self.witness.to_json(),
            "period": self.period,
            "word": list(self.word),
            "distance": float(self.squared_distance) ** 0.5,
        }


def periodic_density_witness(
    center: CnPoint, eps, max_period: int = 10, brute_cap: int = 64
) -> DensityWitness:
    """A B_n-periodic class within eps of center, verified by iterating B_n."""
    n = center.base
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if center.kind == SINGULAR:
        return DensityWitness(center, center, 1, (0,), _ZERO)
    eps2 = eps * eps
    for p in range(1, max_period + 1):
        if n**p <= brute_cap:
            words: Iterable = itertools.product(range(n), repeat=p)
        else:
            words = _targeted_words(n, center, p)
        for w in words:
            cand = periodic_point(n, w)
            d2 = squared_distance(center, cand)
            if d2 < eps2:
                if baker_iter(cand, p) != cand:
                    raise AssertionError(f"periodic word {w} does not give a period-{p} class")
                return DensityWitness(center, cand, p, tuple(w), d2)
    raise RuntimeError(f"no periodic point within {eps} of {center} with period <= {max_period}")


def parse_point(text: str, n: int) -> CnPoint:
    """Parse "x,y" with rational or digit-expansion coordinates."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"expected 'x,y', got {text!r}")
    coords = [DigitNumber.parse(p).value() if "_" in p else Fraction(p) for p in parts]
    return canonicalize(coords[0], coords[1], n)

