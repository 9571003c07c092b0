"""Blow-up atlases over a toral automorphism and the finite-depth inverse limit.

Stage 0 is the torus.  Stage j blows up the j-th registered periodic orbit:
each of its points is replaced by the circle of directions at that point.
A LimPoint stores stages 0..k; a stage coordinate is a base point plus, when
the point sits on a circle blown at that stage or earlier, a direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..toral import CAT_MAP, PILLOW_BRANCH, ToralAuto, TorusPoint, apply_auto

PHI = (1 + math.sqrt(5)) / 2


class AtlasError(ValueError):
    pass


def sign_surd5(a, b):
    """Exact sign of a + b*sqrt(5) for integers (or integer arrays) a, b."""
    a = np.asarray(a, dtype=object if _big(a, b) else np.int64)
    b = np.asarray(b, dtype=a.dtype)
    sa, sb = np.sign(a), np.sign(b)
    # when signs differ the larger of a^2 and 5 b^2 wins
    mag = np.sign(a * a - 5 * b * b)
    out = np.where(sa == sb, sa, np.where(sa == 0, sb, np.where(sb == 0, sa, sa * mag)))
    return out.astype(np.int64) if out.dtype == object else out


def _big(*vals) -> bool:
    return any(isinstance(v, int) and abs(v) > 2**30 for v in vals) or any(
        isinstance(v, np.ndarray) and v.dtype == object for v in vals
    )


@dataclass(frozen=True)
class Eigenframe:
    """Orthonormal eigencoordinates of the cat map differential.

    e_c = (1, -phi)/|.| spans the contracting line and e_e = (phi, 1)/|.| the
    expanding one; p and q are the coordinates along them.  Sector tests on
    integer vectors are exact:
      |p| > |q|  iff  x^2 + 4xy - y^2 < 0,
      p > 0      iff  x - phi*y > 0,   q > 0  iff  phi*x + y > 0.
    """

    lam: float = PHI**2

    @property
    def e_c(self) -> np.ndarray:
        v = np.array([1.0, -PHI])
        return v / np.linalg.norm(v)

    @property
    def e_e(self) -> np.ndarray:
        v = np.array([PHI, 1.0])
        return v / np.linalg.norm(v)

    def coords(self, x, y):
        return x * self.e_c[0] + y * self.e_c[1], x * self.e_e[0] + y * self.e_e[1]

    @staticmethod
    def p_sign(x, y):
        # x - phi*y = (2x - y - y*sqrt5)/2
        return sign_surd5(2 * np.asarray(x) - np.asarray(y), -np.asarray(y))

    @staticmethod
    def q_sign(x, y):
        # phi*x + y = (x + 2y + x*sqrt5)/2
        return sign_surd5(np.asarray(x) + 2 * np.asarray(y), np.asarray(x))

    @staticmethod
    def contracting_dominant(x, y):
        x, y = np.asarray(x), np.asarray(y)
        return x * x + 4 * x * y - y * y < 0

    @staticmethod
    def expanding_dominant(x, y):
        x, y = np.asarray(x), np.asarray(y)
        return x * x + 4 * x * y - y * y > 0

    def sector(self, x, y):
        """1..4 for D1..D4 (D1 around +e_c, D2 around +e_e), 0 on diagonals or the origin."""
        x, y = np.asarray(x), np.asarray(y)
        c = self.contracting_dominant(x, y)
        e = self.expanding_dominant(x, y)
        ps, qs = self.p_sign(x, y), self.q_sign(x, y)
        return np.where(c, np.where(ps > 0, 1, 3), np.where(e, np.where(qs > 0, 2, 4), 0))


@dataclass(frozen=True)
class BlownOrbit:
    points: tuple[TorusPoint, ...]
    stage: int
    radius: float  # circle scale rho for the angular part of d_j

    @property
    def period(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class BlowupAtlas:
    """A toral automorphism with an ordered list of blown periodic orbits.

    ``model`` is "torus" (blow-ups upstairs) or "pillow" (blow-ups on the
    pillowcase sphere, where orbits must avoid the four branch points).
    """

    auto: ToralAuto
    orbits: tuple[BlownOrbit, ...] = ()
    model: str = "torus"
    rho0: float = 1 / (2 * math.pi)

    def __post_init__(self):
        if self.model not in ("torus", "pillow"):
            raise AtlasError(f"unknown model {self.model!r}")

    @property
    def stages(self) -> int:
        return len(self.orbits)

    def blown_points(self, stage: int | None = None) -> dict[TorusPoint, BlownOrbit]:
        top = self.stages if stage is None else stage
        return {p: o for o in self.orbits if o.stage <= top for p in o.points}

    def circle_charts(self) -> int:
        return sum(o.period for o in self.orbits)

    def differential(self) -> np.ndarray:
        return np.array(self.auto.matrix, dtype=float)

    def to_json(self) -> dict:
        return {
            "matrix": [list(r) for r in self.auto.matrix],
            "model": self.model,
            "orbits": [
                {"stage": o.stage, "period": o.period, "radius": o.radius, "points": [p.to_json() for p in o.points]}
                for o in self.orbits
            ],
        }


def _orbit_of(A: ToralAuto, z: TorusPoint, cap: int = 10**6) -> list[TorusPoint]:
    pts = [z]
    w = apply_auto(A, z)
    while w != z:
        pts.append(w)
        if len(pts) > cap:
            raise AtlasError("orbit is not periodic within the cap")
        w = apply_auto(A, w)
    return pts


def blow_up(atlas: BlowupAtlas, point: TorusPoint) -> BlowupAtlas:
    """Blow up the periodic orbit of ``point`` as the next stage."""
    pts = _orbit_of(atlas.auto, point)
    taken = atlas.blown_points()
    if any(p in taken for p in pts):
        raise AtlasError("orbit meets an already blown orbit")
    if atlas.model == "pillow":
        for p in pts:
            if (p.x, p.y) in PILLOW_BRANCH:
                raise AtlasError(f"orbit meets the branch point {p}")
        # on the pillowcase the orbit of z and of -z are the same set of points
        pts = sorted({min(p, -p) for p in pts})
    stage = atlas.stages + 1
    orbit = BlownOrbit(tuple(pts), stage, atlas.rho0 / 2 ** (stage - 1))
    return BlowupAtlas(atlas.auto, atlas.orbits + (orbit,), atlas.model, atlas.rho0)


def default_atlas() -> BlowupAtlas:
    """Cat map with its fixed point (0, 0) blown up at stage 1."""
    return blow_up(BlowupAtlas(ToralAuto(CAT_MAP)), TorusPoint(0, 0))


# -- directions -------------------------------------------------------------


def transport(matrix, theta: float) -> float:
    """v -> Dv/|Dv| on angles."""
    (a, b), (c, d) = matrix
    x, y = math.cos(theta), math.sin(theta)
    return math.atan2(c * x + d * y, a * x + b * y) % (2 * math.pi)


def fixed_directions(matrix) -> list[float]:
    """Angles fixed by transport: eigenvectors with positive eigenvalue, both orientations."""
    M = np.array(matrix, dtype=float)
    vals, vecs = np.linalg.eig(M)
    out = []
    for lam, v in zip(vals.real, vecs.T.real):
        if lam > 0:
            t = math.atan2(v[1], v[0]) % (2 * math.pi)
            out += [t, (t + math.pi) % (2 * math.pi)]
    return sorted(out)


def angle_dist(a: float, b: float) -> float:
    d = abs(a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


def contracting_angle(sign: int = 1) -> float:
    e = Eigenframe().e_c * sign
    return math.atan2(e[1], e[0]) % (2 * math.pi)


# -- inverse-limit points ------------------------------------------------------


@dataclass(frozen=True)
class Coord:
    point: TorusPoint
    direction: float | None = None

    def to_json(self):
        return {"point": self.point.to_json(), "direction": self.direction}


def _lift(v: Fraction) -> Fraction:
    """Representative of v mod 1 in [-1/2, 1/2)."""
    v = v % 1
    return v - 1 if v >= Fraction(1, 2) else v


def torus_delta(a: TorusPoint, b: TorusPoint) -> tuple[Fraction, Fraction]:
    return _lift(a.x - b.x), _lift(a.y - b.y)


def torus_dist(a: TorusPoint, b: TorusPoint) -> float:
    dx, dy = torus_delta(a, b)
    return math.hypot(dx, dy)


@dataclass(frozen=True)
class LimPoint:
    atlas: BlowupAtlas
    coords: tuple[Coord, ...]

    @property
    def depth(self) -> int:
        return len(self.coords) - 1

    def check(self) -> None:
        """Compatibility: collapsing stage j gives stage j-1."""
        for j in range(1, len(self.coords)):
            if collapse(self.atlas, j, self.coords[j]) != self.coords[j - 1]:
                raise AtlasError(f"coordinates {j - 1} and {j} are incompatible")
        for j, c in enumerate(self.coords):
            on_circle = c.point in self.atlas.blown_points(j)
            if on_circle != (c.direction is not None):
                raise AtlasError(f"stage {j}: direction present iff the point is blown by then")

    @classmethod
    def lift(cls, atlas: BlowupAtlas, point: TorusPoint, depth: int = 3, direction: float | None = None) -> "LimPoint":
        """The unique point over ``point`` (or over the given circle direction)."""
        if direction is None and point in atlas.blown_points(depth):
            raise AtlasError("a blown point needs a direction")
        coords = []
        for j in range(depth + 1):
            orb = atlas.blown_points(j).get(point)
            coords.append(Coord(point, direction % (2 * math.pi) if orb is not None else None))
        z = cls(atlas, tuple(coords))
        z.check()
        return z

    def base(self) -> TorusPoint:
        return self.coords[0].point

    def to_json(self) -> dict:
        return {"depth": self.depth, "coords": [c.to_json() for c in self.coords]}


def collapse(atlas: BlowupAtlas, stage: int, c: Coord) -> Coord:
    """pi_stage: forget the direction on circles created at this stage."""
    orb = atlas.blown_points(stage).get(c.point)
    if orb is not None and orb.stage == stage:
        return Coord(c.point, None)
    return c


def h_apply(z: LimPoint, direction: str = "forward", check: bool = True) -> LimPoint:
    """Coordinatewise H_j; directions move by the normalized differential."""
    if check:
        z.check()
    A = z.atlas.auto
    M = A.matrix if direction == "forward" else A.inverse_matrix()
    out = []
    for c in z.coords:
        p = apply_auto(A, c.point, direction)
        out.append(Coord(p, None if c.direction is None else transport(M, c.direction)))
    w = LimPoint(z.atlas, tuple(out))
    if check:
        w.check()
    return w


# -- the metric -------------------------------------------------------------


def _psi(center: TorusPoint, c: Coord) -> float | None:
    """Direction of c seen from center: the stored direction on the circle, else of the shortest displacement."""
    if c.point == center:
        return c.direction
    dx, dy = torus_delta(c.point, center)
    return math.atan2(dy, dx) % (2 * math.pi)


def stage_dist(atlas: BlowupAtlas, j: int, a: Coord, b: Coord) -> float:
    """d_j = max(torus distance, rho_c * angular distance seen from every center blown by stage j)."""
    d = torus_dist(a.point, b.point)
    for center, orb in atlas.blown_points(j).items():
        ua, ub = _psi(center, a), _psi(center, b)
        if ua is not None and ub is not None:
            d = max(d, orb.radius * angle_dist(ua, ub))
    return d


@dataclass(frozen=True)
class MetricValue:
    value: float
    tail: float  # certified bound on the omitted terms j > depth

    @property
    def upper(self) -> float:
        return self.value + self.tail


def dinf_terms(atlas: BlowupAtlas, ds) -> MetricValue:
    total = sum(d / (2**j * (1 + d)) for j, d in enumerate(ds))
    return MetricValue(total, 2.0 ** -(len(ds) - 1))


def dinf(z: LimPoint, w: LimPoint) -> MetricValue:
    if z.atlas != w.atlas or z.depth != w.depth:
        raise AtlasError("points live on different truncations")
    ds = [stage_dist(z.atlas, j, a, b) for j, (a, b) in enumerate(zip(z.coords, w.coords))]
    return dinf_terms(z.atlas, ds)


def special_point(atlas: BlowupAtlas, sign: int = 1, depth: int = 3) -> LimPoint:
    """z(1) (sign +1) or z(2) (sign -1): the fixed point with a contracting direction."""
    z1 = atlas.orbits[0].points[0]
    return LimPoint.lift(atlas, z1, depth, contracting_angle(sign))


__all__ = [
    "AtlasError",
    "BlowupAtlas",
    "Coord",
    "Eigenframe",
    "LimPoint",
    "MetricValue",
    "angle_dist",
    "blow_up",
    "collapse",
    "contracting_angle",
    "default_atlas",
    "dinf",
    "fixed_directions",
    "h_apply",
    "special_point",
    "stage_dist",
    "transport",
]
