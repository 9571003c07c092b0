"""Hyperbolic toral automorphisms and their pillowcase quotient."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import mpmath

from .surd import QuadSurd

CAT_MAP = ((2, 1), (1, 1))
PILLOW_BRANCH = (
    (Fraction(0), Fraction(0)),
    (Fraction(1, 2), Fraction(0)),
    (Fraction(0), Fraction(1, 2)),
    (Fraction(1, 2), Fraction(1, 2)),
)
MAX_DENOMINATOR = 4096


def _squarefree_split(m: int) -> tuple[int, int]:
    """m = s^2 * d with d square-free; returns (s, d)."""
    s, d = 1, m
    f = 2
    while f * f <= d:
        while d % (f * f) == 0:
            d //= f * f
            s *= f
        f += 1
    return s, d


@dataclass(frozen=True)
class ToralAuto:
    matrix: tuple[tuple[int, int], tuple[int, int]]
    leading: QuadSurd = field(init=False, compare=False)

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        m = ((int(a), int(b)), (int(c), int(d)))
        object.__setattr__(self, "matrix", m)
        det = a * d - b * c
        if abs(det) != 1:
            raise ValueError(f"|det A| = {abs(det)}, not 1")
        if not is_hyperbolic(m):
            raise ValueError(f"{m} is not hyperbolic (an eigenvalue has modulus 1)")
        t = a + d
        disc = t * t - 4 * det
        s, sq = _squarefree_split(disc)
        # lambda = (|t| + sqrt(disc)) / 2, the eigenvalue of largest modulus up to sign
        lam = QuadSurd(Fraction(abs(t), 2), Fraction(s, 2), sq)
        object.__setattr__(self, "leading", lam)

    @classmethod
    def parse(cls, text: str) -> "ToralAuto":
        vals = [int(v) for v in text.replace(";", ",").split(",")]
        if len(vals) != 4:
            raise ValueError("matrix needs four entries a,b,c,d")
        return cls(((vals[0], vals[1]), (vals[2], vals[3])))

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    @property
    def trace(self) -> int:
        return self.matrix[0][0] + self.matrix[1][1]

    def inverse_matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        (a, b), (c, d) = self.matrix
        det = self.det
        return ((d * det, -b * det), (-c * det, a * det))

    def eigenvalues(self) -> tuple[QuadSurd, QuadSurd]:
        """(expanding, contracting) eigenvalues with their signs."""
        sign = 1 if self.trace > 0 else -1
        lam = self.leading * sign
        return lam, Fraction(self.det) / lam


def is_hyperbolic(m) -> bool:
    (a, b), (c, d) = m
    det, t = a * d - b * c, a + d
    if det == 1:
        return abs(t) > 2
    if det == -1:
        return t != 0
    disc = t * t - 4 * det
    return disc > 0 and isqrt(disc) ** 2 != disc


@dataclass(frozen=True, order=True)
class TorusPoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x) % 1)
        object.__setattr__(self, "y", Fraction(self.y) % 1)

    def __neg__(self):
        return TorusPoint(-self.x, -self.y)

    @property
    def denominator(self) -> int:
        return max(self.x.denominator, self.y.denominator)

    def to_json(self) -> list[str]:
        return [str(self.x), str(self.y)]

    def __str__(self):
        return f"({self.x}, {self.y})"

    @classmethod
    def parse(cls, text: str) -> "TorusPoint":
        x, y = (Fraction(v.strip()) for v in text.split(","))
        return cls(x, y)


def apply_auto(A: ToralAuto, z: TorusPoint, direction: str = "forward") -> TorusPoint:
    if direction == "forward":
        (a, b), (c, d) = A.matrix
    elif direction == "inverse":
        (a, b), (c, d) = A.inverse_matrix()
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return TorusPoint(a * z.x + b * z.y, c * z.x + d * z.y)


def torus_orbit(A: ToralAuto, z: TorusPoint, steps: int) -> list[TorusPoint]:
    out = [z]
    for _ in range(steps):
        out.append(apply_auto(A, out[-1]))
    return out


@dataclass(frozen=True)
class PillowPoint:
    """Class of {z, -z}: the smaller member in (x, y) order represents it."""

    rep: TorusPoint
    fiber_size: int

    def fiber(self) -> list[TorusPoint]:
        return [self.rep] if self.fiber_size == 1 else [self.rep, -self.rep]


def pillowcase(z: TorusPoint) -> PillowPoint:
    w = -z
    return PillowPoint(min(z, w), 1 if z == w else 2)


def pillow_apply(A: ToralAuto, q: PillowPoint, direction: str = "forward") -> PillowPoint:
    """The induced sphere map, computed from each fiber member; they must agree."""
    imgs = {pillowcase(apply_auto(A, z, direction)) for z in q.fiber()}
    if len(imgs) != 1:
        raise AssertionError(f"pillowcase map ill-defined at {q}")
    return imgs.pop()


def grid_points(q: int) -> list[TorusPoint]:
    return [TorusPoint(Fraction(i, q), Fraction(j, q)) for i in range(q) for j in range(q)]


@dataclass
class PeriodicOrbit:
    points: list[TorusPoint]

    @property
    def period(self) -> int:
        return len(self.points)

    def meets_branch(self) -> bool:
        return any((p.x, p.y) in PILLOW_BRANCH for p in self.points)

    def to_json(self) -> dict:
        return {"period": self.period, "points": [p.to_json() for p in self.points]}


def periodic_points(A: ToralAuto, q: int, cap: int = MAX_DENOMINATOR) -> list[PeriodicOrbit]:
    """All points of the 1/q grid, grouped into F_A-orbits with exact periods.

    Every such point is periodic because A permutes the finite grid.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if q > cap:
        raise ValueError(f"q={q} exceeds the cap {cap}")
    (a, b), (c, d) = A.matrix
    seen = set()
    orbits = []
    for i in range(q):
        for j in range(q):
            if (i, j) in seen:
                continue
            pts = []
            u, v = i, j
            while (u, v) not in seen:
                seen.add((u, v))
                pts.append(TorusPoint(Fraction(u, q), Fraction(v, q)))
                u, v = (a * u + b * v) % q, (c * u + d * v) % q
            orbits.append(PeriodicOrbit(pts))
    return orbits


def orbits_avoiding_branch(orbits: list[PeriodicOrbit]) -> list[PeriodicOrbit]:
    return [o for o in orbits if not o.meets_branch()]


def smallest_blowup_orbit(A: ToralAuto, max_q: int = 64) -> PeriodicOrbit:
    """Shortest periodic orbit avoiding the four pillowcase branch points (smallest q first)."""
    best = None
    for q in range(1, max_q + 1):
        for o in orbits_avoiding_branch(periodic_points(A, q)):
            if best is None or o.period < best.period:
                best = o
        if best is not None and best.period <= q:
            break
    if best is None:
        raise RuntimeError("no orbit avoids the branch points")
    return best


def auto_entropy(A: ToralAuto, dps: int = 40):
    """log of the leading eigenvalue modulus, as an mpmath number."""
    with mpmath.workdps(dps):
        return mpmath.log(A.leading.to_mpf(dps + 10))
