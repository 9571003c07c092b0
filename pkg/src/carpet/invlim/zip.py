"""A model zip neighborhood and its collapse maps.

N is the closed disc of radius 1 centered at (1, 0), so the origin O lies on
its boundary.  Points are written in polar form (alpha, t) about O with
|alpha| <= pi/2; the ray at angle alpha leaves N at t = 2 cos(alpha).  The
zip Z is the segment from O along alpha = 0 of length ell < 2.

Both maps act ray by ray as a two-piece linear map of [0, 2 cos(alpha)]
fixing the far end, with knot K(alpha) = ell * cos(alpha) sent to
s * K(alpha).  For h the scale is s(alpha) = min(1, |alpha| / alpha0), so Z
collapses to O and rays with |alpha| >= alpha0 are untouched.  For h_delta
the scale is max(s(alpha), delta / ell), so Z goes onto the segment of
length delta and the map is a bijection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ZipModel:
    ell: float = 1.0
    alpha0: float = math.pi / 4

    def __post_init__(self):
        if not 0 < self.ell < 2:
            raise ValueError("zip length must lie in (0, 2)")
        if not 0 < self.alpha0 <= math.pi / 2:
            raise ValueError("alpha0 must lie in (0, pi/2]")

    def ray_length(self, alpha):
        return 2 * np.cos(alpha)

    def knot(self, alpha):
        return self.ell * np.cos(alpha)

    def scale(self, alpha, delta: float | None = None):
        s = np.minimum(1.0, np.abs(alpha) / self.alpha0)
        if delta is not None:
            s = np.maximum(s, delta / self.ell)
        return s

    def radial(self, alpha, t, delta: float | None = None):
        """Image radius of the point (alpha, t)."""
        alpha, t = np.asarray(alpha, float), np.asarray(t, float)
        L, K, s = self.ray_length(alpha), self.knot(alpha), self.scale(alpha, delta)
        inner = s * t
        with np.errstate(divide="ignore", invalid="ignore"):
            outer = s * K + (t - K) * (L - s * K) / (L - K)
        return np.where(t <= K, inner, np.where(L > K, outer, t))

    def h(self, alpha, t):
        return self.radial(alpha, t)

    def h_delta(self, alpha, t, delta: float):
        self.check_delta(delta)
        return self.radial(alpha, t, delta)

    def check_delta(self, delta: float) -> None:
        if not 0 < delta < self.ell:
            raise ValueError(f"delta={delta} outside (0, {self.ell})")

    def ray_gap(self, alpha, delta: float):
        """Exact sup over one ray of |h_delta - h|: the two maps differ most at the knot."""
        return np.maximum(0.0, delta / self.ell - np.abs(alpha) / self.alpha0) * self.knot(alpha)

    def gap_lipschitz(self, delta: float) -> float:
        """Bound on |d/dalpha ray_gap|."""
        return self.ell / self.alpha0 + delta


def to_xy(alpha, t):
    return t * np.cos(alpha), t * np.sin(alpha)


@dataclass
class ZipReport:
    delta: float
    grid_max: float
    certified: float
    pointwise_max: float
    boundary_max: float
    zip_image_diameter: float
    bijective: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def zip_maps(model: ZipModel, delta: float, angles: int = 1 << 16, radii: int = 64) -> ZipReport:
    """Sup distance between h_delta and h with a Lipschitz certificate.

    On each ray the exact sup is ``ray_gap``.  Sampling it on a uniform angle
    grid of step da and adding Lip * da / 2 bounds the sup over the disc.  A
    separate point grid cross-checks the per-ray formula.
    """
    model.check_delta(delta)
    alpha = np.linspace(-math.pi / 2, math.pi / 2, angles + 1)
    da = alpha[1] - alpha[0]
    gaps = model.ray_gap(alpha, delta)
    grid_max = float(gaps.max())
    certified = grid_max + model.gap_lipschitz(delta) * da / 2

    a = np.linspace(-math.pi / 2, math.pi / 2, 257)[:, None]
    t = np.linspace(0.0, 1.0, radii + 1)[None, :] * model.ray_length(a)
    diff = np.abs(model.h_delta(a, t, delta) - model.h(a, t))
    pointwise = float(diff.max())
    if pointwise > certified + 1e-12:
        raise AssertionError("point grid exceeds the certified bound")

    edge = model.ray_length(alpha)
    boundary = float(
        max(np.abs(model.h(alpha, edge) - edge).max(), np.abs(model.h_delta(alpha, edge, delta) - edge).max())
    )
    zt = np.linspace(0, model.ell, 101)
    zip_diam = float(np.ptp(model.h(np.zeros_like(zt), zt)))
    # h_delta is increasing on every ray iff both linear pieces have positive slope
    s = model.scale(alpha, delta)
    L, K = model.ray_length(alpha), model.knot(alpha)
    inner_ok = bool((s > 0).all())
    outer_ok = bool(((L - s * K) > 0).all())
    return ZipReport(delta, grid_max, certified, pointwise, boundary, zip_diam, inner_ok and outer_ok)


def dyadic_schedule(model: ZipModel, kmax: int = 12) -> list[float]:
    return [model.ell / 2**k for k in range(1, kmax + 1)]


@dataclass
class ConvergenceReport:
    targets: dict
    schedule: list
    monotone: bool

    @property
    def passed(self) -> bool:
        return self.monotone and all(v is not None for v in self.targets.values())

    def to_json(self) -> dict:
        return {
            "schedule": [r.to_json() for r in self.schedule],
            "monotone": self.monotone,
            "first_delta_below": {str(k): v for k, v in self.targets.items()},
            "passed": self.passed,
        }


def near_homeomorphism(model: ZipModel | None = None, eps_list=(1e-1, 1e-2, 1e-3), kmax: int = 12) -> ConvergenceReport:
    model = model or ZipModel()
    reports = [zip_maps(model, d) for d in dyadic_schedule(model, kmax)]
    bounds = [r.certified for r in reports]
    monotone = all(b2 <= b1 for b1, b2 in zip(bounds, bounds[1:]))
    targets = {}
    for eps in eps_list:
        targets[eps] = next((r.delta for r in reports if r.certified < eps), None)
    return ConvergenceReport(targets, reports, monotone)
