"""Grid searches around the blown fixed point of the cat map.

Everything here works with necessary conditions derived from the metric.
If dinf(y, w) < eps then d_0 < R = eps/(1-eps) and d_1 < 2eps/(1-2eps).
When w sits over the fixed point z1 with a contracting direction, the
second bound forces the direction of y seen from z1 into a cone of
half-angle eta = 2eps/((1-2eps) rho) about that direction.  With
eta <= pi/4 the cone lies in the open sector D1 (or D3), which is an exact
integer test on grid points.  A candidate failing a necessary condition is
excluded for good; the search reports what is left.

These are finite searches at a stated resolution.  They are evidence, not
proofs.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
import numpy as np

from .atlas import BlowupAtlas, Eigenframe, contracting_angle, default_atlas

EPISTEMIC_LABEL = "falsification evidence at the stated resolution and budget, not a proof"
FRAME = Eigenframe()


def _centered(v: np.ndarray, S: int) -> np.ndarray:
    return np.where(v >= S // 2, v - S, v)


def region_symbol(dx, dy, r2_scaled) -> np.ndarray:
    """Trace letters: '1'-'4' for the sector when inside the radius, 'o' outside it, 'z' at the fixed point."""
    dx, dy = np.asarray(dx), np.asarray(dy)
    near = dx * dx + dy * dy < r2_scaled
    sec = FRAME.sector(dx, dy)
    letters = np.array(list("z1234"))[sec]
    out = np.where(near, letters, "o")
    return np.where((dx == 0) & (dy == 0), "z", out)


def rle(s: str) -> str:
    if not s:
        return ""
    out, cur, n = [], s[0], 0
    for ch in s:
        if ch == cur:
            n += 1
        else:
            out.append(f"{cur}{n}")
            cur, n = ch, 1
    out.append(f"{cur}{n}")
    return " ".join(out)


# -- thresholds ---------------------------------------------------------------


@dataclass(frozen=True)
class Thresholds:
    """Radii derived from the chosen metric and region size."""

    region_eps: float  # D = box of half-width lam * region_eps in eigencoordinates
    rho: float
    lam: float

    @property
    def box(self) -> float:
        return self.lam * self.region_eps

    @property
    def M(self) -> float:
        # leaving D costs d_0 >= box; leaving the sector costs d_1 >= rho * pi/4
        return min(self.box, self.rho * math.pi / 4)

    @property
    def r_quarter(self) -> float:
        return self.M / 4

    @property
    def r_exact(self) -> float:
        """Largest r for which dinf < r rules out both ways of leaving D1."""
        b, c = self.box, self.rho * math.pi / 4
        return min(b / (1 + b), c / (2 * (1 + c)))

    def radius(self, eps: float) -> float:
        return eps / (1 - eps)

    def cone(self, eps: float) -> float:
        return 2 * eps / ((1 - 2 * eps) * self.rho)

    def to_json(self) -> dict:
        return {"region_eps": self.region_eps, "rho": self.rho, "box": self.box, "M": self.M,
                "r_quarter": self.r_quarter, "r_exact": self.r_exact}


def thresholds(atlas: BlowupAtlas, region_eps: float = 1 / 16) -> Thresholds:
    return Thresholds(region_eps, atlas.orbits[0].radius, FRAME.lam)


# -- ball projection ----------------------------------------------------------


def dinf_over_fixed(atlas: BlowupAtlas, sign: int, dx, dy, theta, depth: int = 3) -> np.ndarray:
    """Vectorized dinf(z(sign), y) for y over the blown fixed point.

    (dx, dy) is the displacement of Pi_0(y) from z1 (float arrays); where it
    is zero, theta gives the direction of y on the circle.
    """
    rho = atlas.orbits[0].radius
    t = np.hypot(dx, dy)
    ang = np.where(t > 0, np.arctan2(dy, dx), theta) % (2 * math.pi)
    gap = np.abs(ang - contracting_angle(sign)) % (2 * math.pi)
    gap = np.minimum(gap, 2 * math.pi - gap)
    dj = np.maximum(t, rho * gap)
    total = t / (1 + t)
    for j in range(1, depth + 1):
        total = total + dj / (2**j * (1 + dj))
    return total


def _ball_sample(atlas, sign, r, rng, count, depth, denom=1 << 24):
    """Integer displacements (over denom) and circle angles of points y with dinf(z(sign), y) < r.

    About one draw in ten lies on the blown circle.
    """
    reach = r / (1 - r)
    xs, ys, ths = [], [], []
    have = 0
    for _ in range(400):
        m = 4 * count
        on_circle = rng.random(m) < 0.1
        t = reach * np.sqrt(rng.random(m))
        a = rng.uniform(0, 2 * math.pi, m)
        ix = np.where(on_circle, 0, np.rint(t * np.cos(a) * denom)).astype(np.int64)
        iy = np.where(on_circle, 0, np.rint(t * np.sin(a) * denom)).astype(np.int64)
        theta = rng.uniform(0, 2 * math.pi, m)
        d = dinf_over_fixed(atlas, sign, ix / denom, iy / denom, theta, depth)
        keep = d < r
        xs.append(ix[keep]); ys.append(iy[keep]); ths.append(theta[keep])
        have += int(keep.sum())
        if have >= count:
            break
    ix, iy, th = (np.concatenate(v)[:count] for v in (xs, ys, ths))
    return ix, iy, th


def _projection_ok(th: Thresholds, ix, iy, denom, sector) -> np.ndarray:
    at_center = (ix == 0) & (iy == 0)
    p, q = FRAME.coords(ix / denom, iy / denom)
    in_box = (np.abs(p) < th.box) & (np.abs(q) < th.box)
    return at_center | (in_box & (FRAME.sector(ix, iy) == sector))


@dataclass
class BallReport:
    sign: int
    r_star: float
    samples: int
    thresholds: dict
    quarter_radius_passes: bool
    witness_above: dict | None
    history: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.r_star > 0 and self.samples >= 1 and self.quarter_radius_passes

    def to_json(self) -> dict:
        return {
            "target": "z(1)" if self.sign == 1 else "z(2)",
            "sector": "D1" if self.sign == 1 else "D3",
            "r_star": self.r_star,
            "samples_at_r_star": self.samples,
            "thresholds": self.thresholds,
            "quarter_radius_passes": self.quarter_radius_passes,
            "witness_above": self.witness_above,
            "passed": self.passed,
        }


def ball_projection_check(
    atlas: BlowupAtlas | None = None,
    sign: int = 1,
    samples: int = 10_000,
    seed: int = 0,
    region_eps: float = 1 / 16,
    depth: int = 3,
    iterations: int = 24,
) -> BallReport:
    """Bisect for the largest r whose sampled ball projects into D1 (sign +1) or D3 (sign -1)."""
    atlas = atlas or default_atlas()
    th = thresholds(atlas, region_eps)
    sector = 1 if sign == 1 else 3

    denom = 1 << 24

    def trial(r, k):
        rng = np.random.default_rng([seed, sign + 1, k])
        ix, iy, tht = _ball_sample(atlas, sign, r, rng, samples, depth, denom)
        ok = _projection_ok(th, ix, iy, denom, sector)
        bad = None
        if not ok.all():
            b = int(np.flatnonzero(~ok)[0])
            bad = {"displacement": [f"{int(ix[b])}/{denom}", f"{int(iy[b])}/{denom}"], "angle": float(tht[b])}
        return len(ix), bad

    lo, hi, witness, n_lo = 0.0, 0.5, None, 0
    for k in range(iterations):
        mid = (lo + hi) / 2
        got, bad = trial(mid, k)
        if bad is None and got == samples:
            lo, n_lo = mid, got
        else:
            hi = mid
            witness = {"r": mid, "sampled": got, "outside": bad}
    got, bad = trial(th.r_quarter, iterations)
    return BallReport(sign, lo, n_lo, th.to_json(), bad is None and got == samples, witness)


# -- grid dynamics ----------------------------------------------------------


class GridOrbit:
    """Exact cat-map dynamics on the points (i, j) / 2^res, centered at the fixed point."""

    def __init__(self, atlas: BlowupAtlas, res: int):
        self.S = 1 << res
        self.A = np.array(atlas.auto.matrix, dtype=np.int64)

    def step(self, x, y):
        (a, b), (c, d) = self.A
        S = self.S
        return (a * x + b * y) % S, (c * x + d * y) % S

    def centered(self, x, y):
        return _centered(x, self.S), _centered(y, self.S)


def _near_in_sector(dx, dy, r2_scaled, sector):
    return (dx * dx + dy * dy < r2_scaled) & (FRAME.sector(dx, dy) == sector)


@dataclass
class FalsifyReport:
    kind: str
    parameters: dict
    candidates: int
    survivors: list
    exclusions: dict
    traces: list
    extra: dict = field(default_factory=dict)
    label: str = EPISTEMIC_LABEL

    @property
    def passed(self) -> bool:
        return not self.survivors and sum(self.exclusions.values()) == self.candidates

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "label": self.label,
            "parameters": self.parameters,
            "candidates": self.candidates,
            "excluded": sum(self.exclusions.values()),
            "survivors": self.survivors,
            "exclusions": self.exclusions,
            "traces": self.traces,
            **self.extra,
            "passed": self.passed,
        }


def _scaled_r2(radius: float, S: int) -> int:
    # relaxed upward by one unit so the integer test never rejects a true candidate
    return math.floor((radius * S) ** 2) + 1


def _trace_of(go: GridOrbit, x0: int, y0: int, steps: int, r2: int) -> str:
    x, y = np.array([x0]), np.array([y0])
    letters = []
    for _ in range(steps):
        dx, dy = go.centered(x, y)
        letters.append(str(region_symbol(dx, dy, r2)[0]))
        x, y = go.step(x, y)
    return rle("".join(letters))


def _window_scan(go, x, y, start, length, need, r2, sector, offset=0):
    """Advance from step `offset` through [start, start+length) counting hits; drop points that can no longer reach `need`.

    Returns surviving indices, their hit counts and, for dropped points, the step at which they were dropped.
    """
    idx = np.arange(len(x))
    hits = np.zeros(len(x), dtype=np.int64)
    dropped_at = np.full(len(x), -1, dtype=np.int64)
    cx, cy = x.copy(), y.copy()
    for t in range(offset, start + length):
        if t >= start:
            dx, dy = go.centered(cx, cy)
            hit = _near_in_sector(dx, dy, r2, sector)
            hits[idx] += hit
            done = t - start + 1
            alive = hits[idx] + (length - done) >= need
            dropped_at[idx[~alive]] = t
            idx, cx, cy = idx[alive], cx[alive], cy[alive]
            if len(idx) == 0:
                break
        cx, cy = go.step(cx, cy)
    return idx, hits, dropped_at


def _circle_directions(S: int) -> list[tuple[int, int]]:
    """Integer directions on the boundary of the square [-S, S]^2: 8S of them."""
    out = [(S, j) for j in range(-S, S)] + [(-S, j) for j in range(-S + 1, S + 1)]
    out += [(i, S) for i in range(-S + 1, S + 1)] + [(i, -S) for i in range(-S, S)]
    return out


def _circle_scan(atlas, dirs, start, length, need, sector, offset=0):
    """The same count for points on the blown circle, with exact integer transport of directions."""
    (a, b), (c, d) = atlas.auto.matrix
    vx = np.array([v[0] for v in dirs], dtype=object)
    vy = np.array([v[1] for v in dirs], dtype=object)
    idx = np.arange(len(dirs))
    hits = np.zeros(len(dirs), dtype=np.int64)
    dropped_at = np.full(len(dirs), -1, dtype=np.int64)
    for t in range(offset, start + length):
        if t >= start:
            hit = FRAME.sector(vx, vy) == sector
            hits[idx] += hit.astype(np.int64)
            alive = hits[idx] + (length - (t - start + 1)) >= need
            dropped_at[idx[~alive]] = t
            idx, vx, vy = idx[alive], vx[alive], vy[alive]
            if len(idx) == 0:
                break
        vx, vy = a * vx + b * vy, c * vx + d * vy
    return idx, hits, dropped_at


def app_falsify(
    atlas: BlowupAtlas | None = None,
    eps: float = 1 / 32,
    delta1: float = 0.1,
    delta2: float = 0.01,
    n: int = 100,
    res: int = 12,
    region_eps: float = 1 / 16,
    max_traces: int = 40,
) -> FalsifyReport:
    """Search for a point whose orbit follows z(1) for (1-delta1)n of n steps and then z(2) likewise.

    Window 1 is [0, n); window 2 is [h, h+n) for every gap h - n in [0, delta2 n].
    """
    if n < 100 or n % 100:
        raise ValueError("n must be a multiple of 100 and at least 100")
    atlas = atlas or default_atlas()
    th = thresholds(atlas, region_eps)
    if th.cone(eps) > math.pi / 4:
        raise ValueError("eps too large: the direction cone leaves the sector")
    need = math.ceil((1 - delta1) * n)
    gaps = list(range(n, n + math.floor(delta2 * n) + 1))
    go = GridOrbit(atlas, res)
    S = go.S
    r2 = _scaled_r2(th.radius(eps), S)

    # base grid minus the fixed point, whose lifts are the circle
    ii, jj = np.meshgrid(np.arange(S, dtype=np.int64), np.arange(S, dtype=np.int64), indexing="ij")
    x, y = ii.ravel()[1:], jj.ravel()[1:]
    exclusions: Counter = Counter()
    traces, survivors = [], []
    pass1, hits1, drop1 = _window_scan(go, x, y, 0, n, need, r2, 1)
    for t, cnt in zip(*np.unique(drop1[drop1 >= 0], return_counts=True)):
        exclusions[f"grid: window 1 short of {need} hits by step {int(t)}"] += int(cnt)
    # representative traces, one per drop step
    for t in np.unique(drop1[drop1 >= 0])[: max_traces // 2]:
        k = int(np.flatnonzero(drop1 == t)[0])
        traces.append({"reason": f"grid: window 1 short of {need} hits by step {int(t)}",
                       "point": [int(x[k]), int(y[k])], "trace": _trace_of(go, int(x[k]), int(y[k]), int(t) + 1, r2)})
    window1_passers = [[int(x[k]), int(y[k])] for k in pass1]
    for k in pass1:
        ok_any = False
        for h in gaps:
            p2, _, _ = _window_scan(go, x[k : k + 1], y[k : k + 1], h, n, need, r2, 3)
            ok_any |= len(p2) > 0
        if ok_any:
            survivors.append({"point": [int(x[k]), int(y[k])]})
        else:
            exclusions["grid: window 2 short for every gap"] += 1
            traces.append({"reason": "grid: window 2 short for every gap", "point": [int(x[k]), int(y[k])],
                           "trace": _trace_of(go, int(x[k]), int(y[k]), gaps[-1] + n, r2)})

    # the blown circle over z1
    dirs = _circle_directions(S)
    cpass, _, cdrop = _circle_scan(atlas, dirs, 0, n, need, 1)
    for t, cnt in zip(*np.unique(cdrop[cdrop >= 0], return_counts=True)):
        exclusions[f"circle: window 1 short of {need} cone hits by step {int(t)}"] += int(cnt)
    for t in np.unique(cdrop[cdrop >= 0])[: max_traces // 2]:
        k = int(np.flatnonzero(cdrop == t)[0])
        traces.append({"reason": f"circle: window 1 short of {need} cone hits by step {int(t)}",
                       "direction": list(dirs[k]), "trace": _direction_trace(atlas, dirs[k], int(t) + 1)})
    for k in cpass:
        sub = [dirs[k]]
        if any(len(_circle_scan(atlas, sub, h, n, need, 3)[0]) for h in gaps):
            survivors.append({"direction": list(dirs[k])})
        else:
            exclusions["circle: window 2 short for every gap"] += 1
    return FalsifyReport(
        kind="approximate-product",
        parameters={"eps": eps, "delta1": delta1, "delta2": delta2, "n": n, "resolution": f"2^-{res}",
                    "hits_needed": need, "gaps": [g - n for g in gaps], "thresholds": th.to_json(),
                    "shadow_radius": th.radius(eps), "direction_cone": th.cone(eps)},
        candidates=S * S - 1 + len(dirs),
        survivors=survivors,
        exclusions=dict(sorted(exclusions.items())),
        traces=traces,
        extra={"window1_passers": window1_passers},
    )


def _direction_trace(atlas, v, steps) -> str:
    (a, b), (c, d) = atlas.auto.matrix
    x, y = v
    letters = []
    for _ in range(steps):
        letters.append(str(int(FRAME.sector(x, y))))
        x, y = a * x + b * y, c * x + d * y
    return rle("".join(letters))


def spec_falsify(
    atlas: BlowupAtlas | None = None,
    eps: float = 1 / 32,
    N: int = 10,
    res: int = 12,
    x_q: float = 1 / 8,
    region_eps: float = 1 / 16,
    max_traces: int = 20,
) -> FalsifyReport:
    """Search for a point following Q(1) on [0, N+1] and Q(2) at time 2N+1.

    Q(1), Q(2) sit on the contracting line at distance x_q on either side of
    z1, so H^l Q(i) is at +-x_q lam^-l e_c.
    """
    if N < 1:
        raise ValueError("N must be at least 1 (no gap otherwise)")
    atlas = atlas or default_atlas()
    th = thresholds(atlas, region_eps)
    if th.cone(eps) > math.pi / 4:
        raise ValueError("eps too large: the direction cone leaves the sector")
    go = GridOrbit(atlas, res)
    S = go.S
    R = th.radius(eps)
    e_c = FRAME.e_c

    def target(sign, l):
        return sign * x_q * FRAME.lam**-l * e_c

    def close(dx, dy, sign, l):
        tx, ty = target(sign, l) * S
        # small slack keeps the float distance test a necessary condition
        near = (dx - tx) ** 2 + (dy - ty) ** 2 < (R * S) ** 2 * (1 + 1e-9) + 1e-6
        return near & (FRAME.sector(dx, dy) == (1 if sign == 1 else 3))

    # step 0 candidates: the bounding box of the target ball; everything else is too far
    tx, ty = target(1, 0) * S
    rad = math.ceil(R * S) + 1
    ii, jj = np.meshgrid(np.arange(math.floor(tx) - rad, math.ceil(tx) + rad + 1),
                         np.arange(math.floor(ty) - rad, math.ceil(ty) + rad + 1), indexing="ij")
    dx, dy = ii.ravel().astype(np.int64), jj.ravel().astype(np.int64)
    exclusions: Counter = Counter()
    traces = []
    total = S * S - 1
    box_pts = len(dx)
    exclusions["step 0: outside the bounding box of the Q(1) ball"] = total - box_pts
    x, y = dx % S, dy % S
    alive = np.ones(len(x), dtype=bool)
    drop_step = np.full(len(x), -1)
    cx, cy = x.copy(), y.copy()
    for l in range(0, 2 * N + 2):
        if l <= N + 1 or l == 2 * N + 1:
            ddx, ddy = go.centered(cx, cy)
            sign = 1 if l <= N + 1 else -1
            ok = close(ddx, ddy, sign, l) & ~((ddx == 0) & (ddy == 0))
            newly = alive & ~ok
            drop_step[newly] = l
            alive &= ok
        cx, cy = go.step(cx, cy)
    for l, cnt in zip(*np.unique(drop_step[drop_step >= 0], return_counts=True)):
        reason = f"far from Q({1 if l <= N + 1 else 2}) orbit at step {int(l)}"
        exclusions[reason] += int(cnt)
        if len(traces) < max_traces:
            k = int(np.flatnonzero(drop_step == l)[0])
            traces.append({"reason": reason, "point": [int(x[k]), int(y[k])],
                           "trace": _trace_of(go, int(x[k]), int(y[k]), int(l) + 1, _scaled_r2(R, S))})
    survivors = [{"point": [int(x[k]), int(y[k])]} for k in np.flatnonzero(alive)]
    # the circle over z1 is at distance x_q from Q(1) at step 0
    circle = 8 * S
    if x_q > R:
        exclusions["circle: z1 is x_q > R away from Q(1) at step 0"] = circle
    else:
        survivors.append({"circle": "not analysed: x_q <= R"})
    return FalsifyReport(
        kind="specification",
        parameters={"eps": eps, "N": N, "windows": [[0, N + 1], [2 * N + 1, 2 * N + 1]], "x_q": x_q,
                    "resolution": f"2^-{res}", "thresholds": th.to_json(), "shadow_radius": R},
        candidates=total + circle,
        survivors=survivors,
        exclusions=dict(sorted(exclusions.items())),
        traces=traces,
    )


def resolution_sweep(levels=range(8, 15), N: int = 10, **kw) -> dict:
    out = {}
    for res in levels:
        rep = spec_falsify(N=N, res=res, **kw)
        out[f"2^-{res}"] = len(rep.survivors)
    return out
