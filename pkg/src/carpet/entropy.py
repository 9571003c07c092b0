"""Entropy: closed forms, realization of a prescribed value, and
spanning-set estimates r_n(eps, K) on finite samples.

Sample systems live on exact integer lattices (coordinates X/D with a
common denominator D) so every Bowen-ball membership test is decided in
integer arithmetic.  The one exception is the singular class of the
Chamanara surface, whose distance to lattice points is evaluated in
float64 against its countable member list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

from .symbolic import ProbabilityVector

DPS = 40
EXACT_PAIR_LIMIT = 2**16


# -- closed forms ---------------------------------------------------------


def bernoulli_entropy(P: ProbabilityVector):
    """-sum p log p with 0 log 0 = 0, as an mpmath number."""
    with mpmath.workdps(DPS):
        total = mpmath.mpf(0)
        for p in P.entries:
            if p == 0:
                continue
            pm = mpmath.mpf(p.numerator) / p.denominator if isinstance(p, Fraction) else mpmath.mpf(p)
            total -= pm * mpmath.log(pm)
        return +total


def _family_entropy(t, N: int):
    """Entropy of (1 - t, t/(N-1), ..., t/(N-1)); increasing on [0, (N-1)/N]."""
    if t == 0:
        return mpmath.mpf(0)
    if t == 1:
        return mpmath.log(N - 1)
    return -(1 - t) * mpmath.log(1 - t) - t * mpmath.log(t / (N - 1))


def bracket_lower(N: int):
    """Left end of the interval of values guaranteed to be realized with N symbols."""
    with mpmath.workdps(DPS):
        r = mpmath.mpf(N - 1) / N
        return -r * mpmath.log(r) + mpmath.log(N) / N


def choose_symbols(h, rule: str = "smallest", tol=0) -> int:
    """Number of symbols used to realize h.

    ``smallest``: least N >= 2 with h <= log N + tol, for which the family
    P(t) sweeps all of [0, log N].  ``bracket``: least N whose interval
    [bracket_lower(N), log N] contains h.
    """
    with mpmath.workdps(DPS):
        h = mpmath.mpf(h)
        tol = mpmath.mpf(tol)
        if h <= 0:
            raise ValueError("h must be positive")
        N = max(2, int(mpmath.ceil(mpmath.exp(h))))
        while N > 2 and mpmath.log(N - 1) + tol >= h:
            N -= 1
        while mpmath.log(N) + tol < h:
            N += 1
        if rule == "smallest":
            return N
        if rule == "bracket":
            M = 2
            while not (bracket_lower(M) <= h <= mpmath.log(M)):
                M += 1
                if M > 10**7:
                    raise RuntimeError("no bracket found")
            return M
        raise ValueError(f"unknown rule {rule!r}")


@dataclass
class Realization:
    h: object
    N: int
    t: object
    P: ProbabilityVector
    achieved: object
    rule: str

    def to_json(self) -> dict:
        return {
            "target": mpmath.nstr(self.h, 20),
            "N": self.N,
            "t": mpmath.nstr(self.t, 20),
            "P": [mpmath.nstr(p, 20) for p in self.P.entries],
            "achieved": mpmath.nstr(self.achieved, 20),
            "error": mpmath.nstr(abs(self.achieved - self.h), 5),
            "rule": self.rule,
        }


def realize_entropy(h, tol=1e-12, rule: str = "smallest") -> Realization:
    """N and a Bernoulli vector P(t) = (1-t, t/(N-1), ...) with entropy within tol of h."""
    with mpmath.workdps(DPS):
        h = mpmath.mpf(h)
        tol = mpmath.mpf(tol)
        N = choose_symbols(h, rule, tol)
        top = mpmath.mpf(N - 1) / N
        if abs(mpmath.log(N) - h) <= tol:
            t = top
        else:
            lo, hi = mpmath.mpf(0), top
            while hi - lo > mpmath.mpf(2) ** (-120):
                mid = (lo + hi) / 2
                if _family_entropy(mid, N) < h:
                    lo = mid
                else:
                    hi = mid
            t = (lo + hi) / 2
        if t == top:
            P = ProbabilityVector(tuple(Fraction(1, N) for _ in range(N)))
        else:
            P = ProbabilityVector((1 - t,) + tuple(t / (N - 1) for _ in range(N - 1)))
        achieved = bernoulli_entropy(P)
        if abs(achieved - h) > tol:
            raise AssertionError(f"realization missed: {achieved} vs {h}")
        return Realization(h, N, t, P, achieved, rule)


# -- sample systems -----------------------------------------------------------


class LatticeSystem:
    """A map permuting finitely many points X/D of the unit square.

    Subclasses provide integer coordinates, the step map and optionally an
    isometric involution whose orbits are identified (``alt``).
    """

    name = "lattice"
    wrap = False
    denominator: int

    def initial(self) -> np.ndarray:
        raise NotImplementedError

    def step(self, c: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def alt(self, c: np.ndarray) -> np.ndarray | None:
        return None

    special: np.ndarray = np.zeros(0, dtype=np.int64)

    def special_sq_dist(self, c: np.ndarray, idx: int) -> np.ndarray:
        raise NotImplementedError

    def trajectory(self, steps: int) -> list[np.ndarray]:
        if not hasattr(self, "_traj"):
            self._traj = [self.initial()]
        while len(self._traj) < steps:
            self._traj.append(self.step(self._traj[-1]))
        return self._traj[:steps]

    @property
    def size(self) -> int:
        return len(self.initial())


def _sq_delta(a: np.ndarray, b: np.ndarray, D: int, wrap: bool) -> np.ndarray:
    d = np.abs(a - b)
    if wrap:
        d = np.minimum(d, D - d)
    return (d * d).sum(axis=-1)


class IdentitySystem(LatticeSystem):
    name = "identity"

    def __init__(self, q: int = 16):
        self.denominator = q
        self._pts = np.array([(i, j) for i in range(q + 1) for j in range(q + 1)], dtype=np.int64)

    def initial(self):
        return self._pts

    def step(self, c):
        return c


class TorusSystem(LatticeSystem):
    """A toral automorphism on the 1/q grid with the flat torus metric."""

    wrap = True

    def __init__(self, matrix=((2, 1), (1, 1)), q: int = 64):
        self.name = f"torus{matrix}"
        self.matrix = np.array(matrix, dtype=np.int64)
        self.denominator = q
        self._pts = np.array([(i, j) for i in range(q) for j in range(q)], dtype=np.int64)

    def initial(self):
        return self._pts

    def step(self, c):
        return (c @ self.matrix.T) % self.denominator


def _periodic_values(n: int, P: int) -> tuple[np.ndarray, np.ndarray]:
    """Numerators of 0.(w) and 0.(reverse w) over n^P - 1 for all words w."""
    words = np.arange(n**P, dtype=np.int64)
    digits = np.zeros((len(words), P), dtype=np.int64)
    w = words.copy()
    for i in range(P - 1, -1, -1):
        digits[:, i] = w % n
        w //= n
    powers = n ** np.arange(P - 1, -1, -1, dtype=np.int64)
    X = digits @ powers
    Y = digits[:, ::-1] @ powers
    return X, Y


def _singular_sq_dist(n: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Squared distance from points to the countable member list of the singular class."""
    best = np.full(x.shape, np.inf)
    for cx, cy in ((0, 0), (1, 1), (1, 0), (0, 1)):
        best = np.minimum(best, (x - cx) ** 2 + (y - cy) ** 2)
    for k in range(1, 60):
        t = float(n) ** (-k)
        for cx, cy in ((0.0, t), (t, 0.0), (1.0, 1 - t), (1 - t, 1.0)):
            best = np.minimum(best, (x - cx) ** 2 + (y - cy) ** 2)
    return best


class BakerSystem(LatticeSystem):
    """B_n on the factor images of all period-P bisequences.

    Interior periodic points stay on the lattice (Z/D)^2 with D = n^P - 1;
    the two constant words give corners, which form the single singular
    class and are handled separately.
    """

    def __init__(self, n: int = 2, period: int = 12):
        self.n, self.P = n, period
        self.name = f"baker{n}_P{period}"
        D = n**period - 1
        self.denominator = D
        X, Y = _periodic_values(n, period)
        interior = (X > 0) & (X < D) & (Y > 0) & (Y < D)
        pts = np.stack([X[interior], Y[interior]], axis=1)
        pts = self._reduce(pts)
        self._pts = np.concatenate([np.zeros((1, 2), dtype=np.int64), pts])
        self.special = np.array([0], dtype=np.int64)

    def _reduce(self, pts):
        return pts

    def initial(self):
        return self._pts

    def _baker(self, c):
        n, D = self.n, self.denominator
        X, Y = c[:, 0], c[:, 1]
        j = (n * X) // D
        nx = n * X - j * D
        ny_num = Y + j * D
        out = np.stack([nx, ny_num // n], axis=1)
        out[0] = 0  # singular class is fixed
        return out

    def step(self, c):
        return self._baker(c)

    def special_sq_dist(self, c, idx):
        D = float(self.denominator)
        return _singular_sq_dist(self.n, c[:, 0] / D, c[:, 1] / D) * D * D


class QuotientSystem(BakerSystem):
    """T_n on the rotation quotient of the periodic sample of :class:`BakerSystem`."""

    def __init__(self, n: int = 2, period: int = 12):
        super().__init__(n, period)
        self.name = f"quotient{n}_P{period}"

    def _reduce(self, pts):
        D = self.denominator
        rot = D - pts
        keep = (pts[:, 0] < rot[:, 0]) | ((pts[:, 0] == rot[:, 0]) & (pts[:, 1] <= rot[:, 1]))
        return pts[keep]

    def _canon(self, c):
        D = self.denominator
        rot = D - c
        swap = (rot[:, 0] < c[:, 0]) | ((rot[:, 0] == c[:, 0]) & (rot[:, 1] < c[:, 1]))
        out = np.where(swap[:, None], rot, c)
        out[0] = 0
        return out

    def step(self, c):
        return self._canon(self._baker(c))

    def alt(self, c):
        out = self.denominator - c
        out[0] = 0
        return out


@dataclass
class ShiftSample:
    """The full shift on n symbols sampled by all period-P sequences.

    The metric is ultrametric, so (n, 2^-k)-Bowen balls are cylinders on
    indices -k+1 .. n-1+k and r_n is the number of distinct cylinders met.
    """

    n: int = 2
    period: int = 19
    name: str = "fullshift"

    def __post_init__(self):
        if self.n**self.period > 2**24:
            raise ValueError("sample too large")
        self.name = f"fullshift{self.n}_P{self.period}"
        self._words = np.arange(self.n**self.period, dtype=np.int64)

    @property
    def size(self) -> int:
        return len(self._words)

    def digits_at(self, idx: int) -> np.ndarray:
        """s_idx for every sampled sequence, with s_i = w[(i-1) mod P]."""
        pos = (idx - 1) % self.period
        return (self._words // self.n ** (self.period - 1 - pos)) % self.n

    def bowen_count(self, window: int, k: int) -> int:
        if window == 0:
            return 1
        lo, hi = -k + 1, window - 1 + k
        if hi - lo + 1 > self.period:
            raise ValueError(f"period {self.period} cannot resolve window {window} at radius {k}")
        key = np.zeros(len(self._words), dtype=np.int64)
        for i in range(lo, hi + 1):
            key = key * self.n + self.digits_at(i)
        return int(len(np.unique(key)))


# -- spanning numbers -----------------------------------------------------


@dataclass
class SpanResult:
    window: int
    lower: int
    upper: int
    method: str
    pairs: int = 0

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def to_json(self) -> dict:
        return {"window": self.window, "lower": self.lower, "upper": self.upper, "method": self.method,
                "pairs": self.pairs}


def _pair_candidates(keys_a: list[np.ndarray], keys_b: list[np.ndarray], ncell: int, wrap: bool) -> np.ndarray:
    """Index pairs (i, j) whose cells are adjacent in every hashed coordinate block.

    keys_a: per block the cell coordinates of the query points (N, 2);
    keys_b: per block a list of cell-coordinate variants for the targets.
    """
    dims = len(keys_a)
    M = ncell + 3

    def encode(blocks):
        code = np.zeros(len(blocks[0]), dtype=np.int64)
        for b in blocks:
            for col in range(2):
                code = code * M + (b[:, col] + 1)
        return code

    out = []
    N = len(keys_a[0])
    import itertools

    variant_sets = list(itertools.product(*[range(len(v)) for v in keys_b]))
    offsets = list(itertools.product((-1, 0, 1), repeat=2 * dims))
    for var in variant_sets:
        target = encode([keys_b[d][var[d]] for d in range(dims)])
        order = np.argsort(target, kind="stable")
        sorted_codes = target[order]
        for off in offsets:
            shifted = []
            for d in range(dims):
                blk = keys_a[d] + np.array(off[2 * d : 2 * d + 2])
                if wrap:
                    blk = blk % ncell
                shifted.append(blk)
            q = encode(shifted)
            left = np.searchsorted(sorted_codes, q, side="left")
            right = np.searchsorted(sorted_codes, q, side="right")
            counts = right - left
            if counts.sum() == 0:
                continue
            src = np.repeat(np.arange(N), counts)
            starts = np.repeat(left, counts)
            rank = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
            dst = order[starts + rank]
            out.append(np.stack([src, dst], axis=1))
    if not out:
        return np.zeros((0, 2), dtype=np.int64)
    pairs = np.unique(np.concatenate(out), axis=0)
    return pairs


def bowen_pairs(system: LatticeSystem, window: int, eps: Fraction) -> np.ndarray:
    """All (i, j) with d(T^s x_i, T^s x_j) <= eps for s = 0..window-1 (including i = j)."""
    traj = system.trajectory(window)
    D = system.denominator
    eps = Fraction(eps)
    # eps^2 D^2 compared with integer squared distances
    bound_num, bound_den = (eps * D) ** 2, 1
    bound = Fraction(bound_num)
    cell = max(1, math.ceil(eps * D))
    ncell = D // cell + 1 if not system.wrap else max(1, D // cell)
    if system.wrap and D % cell:
        ncell = max(1, D // cell)
        cell = math.ceil(D / ncell)
    steps = [0] if window == 1 else [0, window - 1]
    keys_a, keys_b = [], []
    for s in steps:
        c = traj[s]
        ka = c // cell
        if system.wrap:
            ka = ka % ncell
        keys_a.append(ka)
        variants = [ka]
        alt = system.alt(c)
        if alt is not None:
            kb = alt // cell
            variants.append(kb % ncell if system.wrap else kb)
        keys_b.append(variants)
    pairs = _pair_candidates(keys_a, keys_b, ncell, system.wrap)
    special = set(int(i) for i in system.special)
    if special:
        mask = np.array([(int(a) not in special) and (int(b) not in special) for a, b in pairs]) if len(pairs) else np.zeros(0, bool)
        pairs = pairs[mask] if len(pairs) else pairs
    keep = np.ones(len(pairs), dtype=bool)
    for s in range(window):
        c = traj[s]
        a, b = c[pairs[:, 0]], c[pairs[:, 1]]
        d2 = _sq_delta(a, b, D, system.wrap)
        alt = system.alt(c)
        if alt is not None:
            d2 = np.minimum(d2, _sq_delta(a, alt[pairs[:, 1]], D, system.wrap))
        keep &= d2 * bound_den <= bound
    pairs = pairs[keep]
    extra = []
    for idx in special:
        ok = np.ones(system.size, dtype=bool)
        for s in range(window):
            ok &= system.special_sq_dist(traj[s], idx) <= float(bound)
        ok[list(special)] = False
        js = np.nonzero(ok)[0]
        extra.append(np.stack([np.full(len(js), idx), js], axis=1))
        extra.append(np.stack([js, np.full(len(js), idx)], axis=1))
        extra.append(np.array([[idx, idx]]))
    if extra:
        pairs = np.concatenate([pairs] + extra)
    return pairs


def _greedy_cover(A: sparse.csr_matrix) -> int:
    """Greedy set cover: rows are centers, columns are covered points."""
    N = A.shape[1]
    At = A.T.tocsr()
    gain = np.asarray(A.sum(axis=1)).ravel().astype(np.int64)
    covered = np.zeros(N, dtype=bool)
    picks = 0
    remaining = N
    while remaining:
        c = int(np.argmax(gain))
        row = A.indices[A.indptr[c] : A.indptr[c + 1]]
        new = row[~covered[row]]
        covered[new] = True
        remaining -= len(new)
        picks += 1
        if len(new):
            # every center covering a newly covered point loses one unit of gain
            cols = np.concatenate([At.indices[At.indptr[p] : At.indptr[p + 1]] for p in new])
            np.subtract.at(gain, cols, 1)
    return picks


def _packing_lower(A: sparse.csr_matrix) -> int:
    """Points no two of which share a covering center: a lower bound on the cover size."""
    N = A.shape[1]
    At = A.T.tocsr()
    blocked = np.zeros(N, dtype=bool)
    count = 0
    for p in range(N):
        if blocked[p]:
            continue
        count += 1
        centers = At.indices[At.indptr[p] : At.indptr[p + 1]]
        for c in centers:
            blocked[A.indices[A.indptr[c] : A.indptr[c + 1]]] = True
    return count


MILP_NODE_LIMIT = 1000


def _exact_cover(A: sparse.csr_matrix, node_limit: int = MILP_NODE_LIMIT) -> tuple[int, int] | None:
    """(lower, upper) from the integer program; equal when solved to optimality.

    The search is cut by node count rather than wall clock so that the
    bounds do not depend on machine load.
    """
    n_centers, N = A.shape
    res = milp(
        c=np.ones(n_centers),
        constraints=LinearConstraint(A.T.tocsc(), lb=np.ones(N), ub=np.inf),
        integrality=np.ones(n_centers),
        bounds=Bounds(0, 1),
        options={"node_limit": node_limit, "time_limit": 900.0},
    )
    if res.status == 0:
        v = int(round(res.fun))
        return v, v
    if res.x is not None and getattr(res, "mip_dual_bound", None) is not None:
        return math.ceil(res.mip_dual_bound - 1e-9), int(round(res.fun))
    return None


_COVER_CACHE: dict = {}


def spanning_number(system, window: int, eps, exact_limit: int = EXACT_PAIR_LIMIT) -> SpanResult:
    """r_n(eps, K) for the sample K of ``system``.

    Ultrametric samples are counted exactly by cylinders.  Otherwise the
    spanning sets use centers drawn from K; the minimum is exact (integer
    program) when the instance has at most ``exact_limit`` center-point
    pairs, and is bracketed by a greedy cover and a packing bound beyond.
    """
    if window < 0:
        raise ValueError("window must be >= 0")
    if window == 0:
        return SpanResult(0, 1, 1, "no-conditions")
    if isinstance(system, ShiftSample):
        k = -math.log2(float(eps))
        if not k.is_integer():
            raise ValueError("shift radius must be a power of 1/2")
        r = system.bowen_count(window, int(k))
        return SpanResult(window, r, r, "cylinders")
    pairs = bowen_pairs(system, window, eps)
    N = system.size
    A = sparse.csr_matrix((np.ones(len(pairs), dtype=np.int8), (pairs[:, 0], pairs[:, 1])), shape=(N, N))
    A.data[:] = 1
    A.sort_indices()
    # identical instances recur when Bowen balls stop shrinking (e.g. the identity map)
    digest = (N, A.indptr.tobytes(), A.indices.tobytes())
    if digest in _COVER_CACHE:
        lower, upper, method = _COVER_CACHE[digest]
        return SpanResult(window, lower, upper, method, len(pairs))
    upper = _greedy_cover(A)
    lower = _packing_lower(A)
    method = "greedy=packing" if lower == upper else "bounds"
    if lower != upper and A.nnz <= exact_limit:
        got = _exact_cover(A)
        if got is not None:
            lower, upper = max(lower, got[0]), min(upper, got[1])
            method = "milp" if lower == upper else "milp-bounds"
    _COVER_CACHE[digest] = (lower, upper, method)
    return SpanResult(window, lower, upper, method, len(pairs))


@dataclass
class EntropyReport:
    system: str
    method: str
    value: float
    parameters: dict = field(default_factory=dict)
    series: list = field(default_factory=list)
    note: str = ""

    def to_json(self) -> dict:
        return {
            "system": self.system,
            "method": self.method,
            "value": self.value,
            "parameters": self.parameters,
            "series": self.series,
            "note": self.note,
        }


PROXY_NOTE = (
    "finite-window proxy for the limsup of log r_n / n: the slope "
    "(log r_w - log r_h) / (w - h) of the chord across the last half of the schedule, "
    "from its midpoint window h to its last window w; windows after the sample saturates "
    "(r_n = |K|) are dropped because they carry no further information"
)


def growth_proxy(windows: list[int], counts: list[int]) -> float:
    """Chord slope of log r_n from the midpoint of the schedule to its end."""
    if len(windows) < 2:
        raise ValueError("need at least two windows")
    h = min(len(windows) // 2, len(windows) - 2)
    return (math.log(counts[-1]) - math.log(counts[h])) / (windows[-1] - windows[h])


def entropy_estimate(system, eps, windows) -> EntropyReport:
    """Spanning-set growth along a window schedule; see :data:`PROXY_NOTE`."""
    windows = sorted(windows)
    results = []
    for w in windows:
        r = spanning_number(system, w, eps)
        results.append(r)
        if r.lower >= system.size:
            break
    used = [r.window for r in results]
    uppers = [r.upper for r in results]
    series = [
        {**r.to_json(), "log_r_over_n": (math.log(r.upper) / r.window if r.window else None)} for r in results
    ]
    value = growth_proxy(used, uppers)
    return EntropyReport(
        system=system.name,
        method="spanning-estimate",
        value=value,
        parameters={"eps": str(eps), "windows": windows, "windows_used": used, "sample_size": system.size},
        series=series,
        note=PROXY_NOTE,
    )


def closed_form_report(name: str, value, provenance: str) -> EntropyReport:
    return EntropyReport(system=name, method="closed-form", value=float(value),
                         parameters={"value_40_digits": mpmath.nstr(value, 40)}, note=provenance)
