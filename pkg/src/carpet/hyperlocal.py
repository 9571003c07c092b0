"""Orbits of a hyperbolic linear map near its fixed point.

In eigencoordinates (p, q) the map is L(p, q) = (p / lam, lam * q): the
p-axis contracts and the q-axis expands.  Around the origin sits the box
D = (-lam*eps, lam*eps)^2, split by the diagonals into four sectors, with a
boundary band E where |p| >= eps or |q| >= eps.  An orbit that enters D
close to the contracting axis has to leave along the expanding axis, and
it spends at most half of that excursion in the inner part D1* of the
sector it entered through.

All comparisons are exact: lam is a Fraction or a QuadSurd.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .surd import QuadSurd

OUTSIDE = "outside"
D1_STAR = "D1*"
D1_E = "D1&E"
D2 = "D2"
D3_STAR = "D3*"
D3_E = "D3&E"
D4 = "D4"
AXIS = "axis"

REGIONS = (OUTSIDE, D1_STAR, D1_E, D2, D3_STAR, D3_E, D4, AXIS)


def _exact(v):
    if isinstance(v, QuadSurd):
        return v
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10**12)
    return Fraction(v)


@dataclass(frozen=True)
class HypLinear:
    """(p, q) -> (sign_c * p / lam, sign_e * lam * q) with lam > 1."""

    lam: object
    sign_c: int = 1
    sign_e: int = 1
    matrix: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "lam", _exact(self.lam))
        if not self.lam > 1:
            raise ValueError("expansion factor must exceed 1")
        if self.sign_c not in (1, -1) or self.sign_e not in (1, -1):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def from_matrix(cls, matrix) -> "HypLinear":
        from .toral import ToralAuto

        A = ToralAuto(matrix)
        lam_e, lam_c = A.eigenvalues()
        se = 1 if lam_e > 0 else -1
        sc = 1 if lam_c > 0 else -1
        return cls(abs(lam_e), sc, se, A.matrix)

    def apply(self, z, steps: int = 1):
        p, q = z
        for _ in range(steps):
            p, q = self.sign_c * p / self.lam, self.sign_e * self.lam * q
        return p, q

    def inverse(self, z):
        p, q = z
        return self.sign_c * p * self.lam, self.sign_e * q / self.lam


@dataclass(frozen=True)
class RegionSpec:
    lam: object
    eps: object

    def __post_init__(self):
        object.__setattr__(self, "lam", _exact(self.lam))
        object.__setattr__(self, "eps", _exact(self.eps))
        if not self.eps > 0:
            raise ValueError("eps must be positive")

    @property
    def half_width(self):
        return self.lam * self.eps

    def in_D(self, z) -> bool:
        r = self.half_width
        return abs(z[0]) < r and abs(z[1]) < r

    def in_E(self, z) -> bool:
        return self.in_D(z) and (abs(z[0]) >= self.eps or abs(z[1]) >= self.eps)


def classify_region(spec: RegionSpec, z) -> str:
    """One label per point; axes and diagonals are 'axis' (not counted in any sector)."""
    p, q = z
    if not spec.in_D(z):
        return OUTSIDE
    ap, aq = abs(p), abs(q)
    if p == 0 or q == 0 or ap == aq:
        return AXIS
    if ap > aq:
        in_e = spec.in_E(z)
        if p > 0:
            return D1_E if in_e else D1_STAR
        return D3_E if in_e else D3_STAR
    return D2 if q > 0 else D4


def _in_sector(label: str, sector: int) -> bool:
    if sector == 1:
        return label in (D1_STAR, D1_E)
    return label in (D3_STAR, D3_E)


@dataclass
class Excursion:
    N: int
    K: int
    hits: int
    labels: list[str]
    entry: tuple
    m: int
    witness: dict

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.hits, self.K)

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "K": self.K,
            "hits": self.hits,
            "ratio": str(self.ratio),
            "m": self.m,
            "labels": self.labels,
            "witness": self.witness,
        }


def excursion_stats(
    L: HypLinear,
    spec: RegionSpec,
    z,
    horizon: int = 200,
    sector: int = 1,
    entry: str = "sector",
    count: str = "star",
) -> Excursion | None:
    """First excursion through D entered via sector D1 (or D3) within ``horizon`` steps.

    N is the last step outside D, K the number of consecutive steps inside D.
    ``entry="sector"`` accepts an entry point anywhere in the sector;
    ``entry="literal"`` requires the entry point itself to lie in D1*, which
    a point arriving from outside D can never do (it is always in E).
    ``count="star"`` counts D1* visits; ``count="sector"`` counts all sector
    visits, the variant without the band E.
    Returns None when no qualifying excursion exists within the horizon.
    """
    star = D1_STAR if sector == 1 else D3_STAR
    prev, prev_label = z, classify_region(spec, z)
    for N in range(horizon):
        cur = L.apply(prev)
        label = classify_region(spec, cur)
        ok = label == star if entry == "literal" else _in_sector(label, sector)
        if prev_label != OUTSIDE or not ok:
            prev, prev_label = cur, label
            continue
        entry_point, window = cur, []
        while label != OUTSIDE:
            window.append(label)
            if N + len(window) > horizon:
                return None
            cur = L.apply(cur)
            label = classify_region(spec, cur)
        K = len(window)
        if count == "star":
            hits = sum(1 for lab in window if lab == star)
        else:
            hits = sum(1 for lab in window if _in_sector(lab, sector))
        m, witness = _m_witness(L, spec, entry_point, window, sector)
        return Excursion(N, K, hits, window, entry_point, m, witness)
    return None


def _m_witness(L: HypLinear, spec: RegionSpec, w, window: list[str], sector: int) -> tuple[int, dict]:
    """Check the crossover structure of an excursion with entry point w = L^{N+1}(z).

    With i = j - 1 counting steps after entry, m is the last i at which the
    contracting coordinate still dominates.  The claims checked are
    (a) |p|/lam^m > lam^m |q| and |p|/lam^(m+1) <= lam^(m+1) |q|,
    (b) the star visits are exactly i = 1..m,
    (c) i = m+1..2m lie in D2 or D4 (i = m+1 may sit on a diagonal),
    (d) K >= 2m + 1, so the star proportion is at most m/(2m+1) < 1/2,
    (e) lam^(m+1) |q| < lam*eps whenever m >= 1.
    """
    lam = L.lam
    p, q = abs(w[0]), abs(w[1])
    m = 0
    bp, lq = p, q
    while bp / lam > lq * lam:
        bp, lq = bp / lam, lq * lam
        m += 1
    star = D1_STAR if sector == 1 else D3_STAR
    K = len(window)
    a = (p / lam**m > lam**m * q) and (p / lam ** (m + 1) <= lam ** (m + 1) * q)
    b = [i for i, lab in enumerate(window) if lab == star] == list(range(1, m + 1))
    c = all(
        window[i] in (D2, D4) or (i == m + 1 and window[i] == AXIS) for i in range(m + 1, min(2 * m + 1, K))
    )
    d = K >= 2 * m + 1
    e = (lam ** (m + 1) * q < spec.half_width) if m >= 1 else None
    return m, {"a": a, "b": b, "c": c, "d": d, "e": e}


def witness_ok(ex: Excursion) -> bool:
    return all(v is not False for v in ex.witness.values())


def mirror(z):
    return (-z[0], -z[1])


@dataclass
class HalfBoundReport:
    excursions: int = 0
    max_ratio: Fraction = Fraction(0)
    violations: list = field(default_factory=list)
    witness_failures: list = field(default_factory=list)
    mirror_mismatches: list = field(default_factory=list)
    min_m_with_hits: int | None = None
    sector_count_max_ratio: Fraction = Fraction(0)
    sector_count_counterexample: dict | None = None
    literal_entries: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations and not self.witness_failures and not self.mirror_mismatches

    def to_json(self) -> dict:
        return {
            "excursions": self.excursions,
            "max_ratio": str(self.max_ratio),
            "violations": self.violations[:5],
            "witness_failures": self.witness_failures[:5],
            "mirror_mismatches": self.mirror_mismatches[:5],
            "min_m_with_hits": self.min_m_with_hits,
            "without_band_max_ratio": str(self.sector_count_max_ratio),
            "without_band_counterexample": self.sector_count_counterexample,
            "literal_star_entries": self.literal_entries,
            "passed": self.passed,
        }


def verify_half_bound(
    L: HypLinear,
    spec: RegionSpec,
    samples: Iterable,
    horizon: int = 200,
    sector: int = 1,
    abort: bool = False,
) -> HalfBoundReport:
    """Check n_N^K <= 1/2 on every qualifying excursion among ``samples``.

    Also records how the count behaves without the band E and confirms that
    entering directly into the star region never happens.
    """
    rep = HalfBoundReport()
    for z in samples:
        ex = excursion_stats(L, spec, z, horizon, sector)
        if ex is None:
            continue
        rep.excursions += 1
        rep.max_ratio = max(rep.max_ratio, ex.ratio)
        if ex.ratio > Fraction(1, 2):
            rep.violations.append({"z": [str(c) for c in z], **ex.to_json()})
            if abort:
                raise AssertionError(f"half bound violated at {z}: {ex.ratio}")
        if not witness_ok(ex):
            rep.witness_failures.append({"z": [str(c) for c in z], **ex.to_json()})
        if ex.hits and (rep.min_m_with_hits is None or ex.m < rep.min_m_with_hits):
            rep.min_m_with_hits = ex.m
        mex = excursion_stats(L, spec, mirror(z), horizon, 3 if sector == 1 else 1)
        if mex is None or (mex.N, mex.K, mex.hits) != (ex.N, ex.K, ex.hits):
            rep.mirror_mismatches.append([str(c) for c in z])
        loose = excursion_stats(L, spec, z, horizon, sector, count="sector")
        if loose is not None and loose.ratio > rep.sector_count_max_ratio:
            rep.sector_count_max_ratio = loose.ratio
            if loose.ratio > Fraction(1, 2):
                rep.sector_count_counterexample = {"z": [str(c) for c in z], **loose.to_json()}
        if excursion_stats(L, spec, z, horizon, sector, entry="literal") is not None:
            rep.literal_entries += 1
    return rep


def sample_entries(spec: RegionSpec, count: int, seed: int = 0, sector: int = 1, grid: int = 10**6) -> list:
    """Rational points one step before entering the chosen sector from outside D.

    Entry points w are drawn in the sector with eps <= |p| < lam*eps and
    the preimage L^{-1}(w) is returned, so every sample qualifies.
    """
    rng = random.Random(seed)
    lam, eps = spec.lam, spec.eps
    if isinstance(lam, QuadSurd):
        raise ValueError("sampling needs a rational lam; use exact surd points directly")
    out = []
    while len(out) < count:
        p = eps + (lam * eps - eps) * Fraction(rng.randrange(1, grid), grid)
        q = p * Fraction(rng.randrange(1, grid), grid) * rng.choice((1, -1))
        if sector == 3:
            p = -p
        w = (p, q)
        if classify_region(spec, w) not in (D1_E, D3_E):
            continue
        out.append((p * lam, q / lam))
    return out


def boundary_samples(spec: RegionSpec, steps: int = 40) -> list:
    """Entries on a grid hugging the band E and the diagonal, with tiny offsets."""
    lam, eps = spec.lam, spec.eps
    out = []
    tiny = Fraction(1, 10**9)
    for i in range(steps + 1):
        p = eps + (lam * eps - eps) * Fraction(i, steps)
        for p_ in (p, p + tiny, p - tiny):
            if not (eps <= p_ < lam * eps):
                continue
            for j in range(1, steps + 1):
                for frac in (Fraction(j, steps), Fraction(j, steps) - tiny, eps / p_ * Fraction(j, steps)):
                    q = p_ * frac
                    for s in (1, -1):
                        w = (p_, s * q)
                        if classify_region(spec, w) == D1_E:
                            out.append((p_ * lam, s * q / lam))
    return out
