"""The rotation R(x, y) = (1 - x, 1 - y) on C_n and the quotient sphere Q_n.

R commutes with the baker map, so B_n descends to a homeomorphism T_n of
Q_n = C_n / R.  A quotient class is represented by the lexicographically
smaller (in (x, y)) of the canonical representatives of z and R(z).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chamanara import (
    INTERIOR,
    SIDE_I,
    SIDE_J,
    SINGULAR,
    CnPoint,
    baker_key,
    canonicalize,
    ikey,
)
from .symbolic import canonical_sides
from .digits import expansion_value


class WellDefinednessError(AssertionError):
    pass


def rotate_key(n: int, key: tuple) -> tuple:
    if key[0] == SINGULAR:
        return key
    _, _, xp, xq, yp, yq = key
    return ikey(n, xq - xp, xq, yq - yp, yq)


def rotate(z: CnPoint) -> CnPoint:
    return CnPoint.from_key(z.base, rotate_key(z.base, z.key))


def _precedes(a: tuple, b: tuple) -> bool:
    """Lexicographic (x, y) order of the representatives of two keys."""
    lx, rx = a[2] * b[3], b[2] * a[3]
    if lx != rx:
        return lx < rx
    return a[4] * b[5] <= b[4] * a[5]


def qkey(n: int, key: tuple) -> tuple:
    r = rotate_key(n, key)
    return key if _precedes(key, r) else r


@dataclass(frozen=True)
class QnPoint:
    base: int
    rep: CnPoint
    branch: bool

    def to_json(self) -> dict:
        return {"rep": self.rep.to_json(), "branch": self.branch}

    def __str__(self) -> str:
        tag = " branch" if self.branch else ""
        return f"<{self.rep}{tag}>"


def canonicalize_q(z: CnPoint) -> QnPoint:
    n = z.base
    r = rotate_key(n, z.key)
    k = z.key if _precedes(z.key, r) else r
    return QnPoint(n, CnPoint.from_key(n, k), r == z.key)


def induced_key(n: int, key: tuple, inverse: bool = False) -> tuple:
    """T_n on quotient keys, computed from both fiber members."""
    a = qkey(n, baker_key(n, key, inverse))
    b = qkey(n, baker_key(n, rotate_key(n, key), inverse))
    if a != b:
        raise WellDefinednessError(f"T_n ill-defined at {key}: {a} != {b}")
    return a


def induced_apply(q: QnPoint, direction: str = "forward") -> QnPoint:
    if direction not in ("forward", "inverse"):
        raise ValueError(f"unknown direction {direction!r}")
    k = induced_key(q.base, q.rep.key, direction == "inverse")
    return canonicalize_q(CnPoint.from_key(q.base, k))


def fiber(q: QnPoint) -> list[CnPoint]:
    if q.branch:
        return [q.rep]
    return [q.rep, rotate(q.rep)]


def orbit_q(q: QnPoint, steps: int) -> list[QnPoint]:
    out = [q]
    for _ in range(steps):
        out.append(induced_apply(out[-1]))
    return out


# -- branch points ----------------------------------------------------------


def l_const(n: int, k: int) -> Fraction:
    """Length of I_k: l_1 = 1 + 1/n and l_{k+1} = l_k / n."""
    return (1 + Fraction(1, n)) / Fraction(n) ** (k - 1)


def m_const(n: int, k: int) -> Fraction:
    """Length of J_k: m_k = 1/n^(k-1) + 1/n^k."""
    return Fraction(1, n ** (k - 1)) + Fraction(1, n**k)


def m_hat_1(n: int) -> Fraction:
    """Length of the top partner of J_1, (n-1)/n; its midpoint is the J_1 branch point."""
    return Fraction(n - 1, n)


@dataclass
class BranchCatalog:
    base: int
    depth: int

    def points(self) -> list[tuple[str, CnPoint]]:
        n = self.base
        half = Fraction(1, 2)
        out = [
            ("[(0,0)]", canonicalize(0, 0, n)),
            ("[(1/2,1/2)]", canonicalize(half, half, n)),
            ("[(m_hat_1/2,1)]", canonicalize(m_hat_1(n) / 2, 1, n)),
        ]
        for k in range(1, self.depth + 1):
            out.append((f"[(0,l_{k}/2)]", canonicalize(0, l_const(n, k) / 2, n)))
        for k in range(2, self.depth + 1):
            out.append((f"[(m_{k}/2,0)]", canonicalize(m_const(n, k) / 2, 0, n)))
        return out

    def keys(self) -> set:
        return {p.key for _, p in self.points()}

    def contains(self, z: CnPoint) -> bool:
        return z.key in self.keys()

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "depth": self.depth,
            "l": [str(l_const(self.base, k)) for k in range(1, self.depth + 1)],
            "m": [str(m_const(self.base, k)) for k in range(1, self.depth + 1)],
            "m_hat_1": str(m_hat_1(self.base)),
            "points": [{"label": lab, "point": p.to_json()} for lab, p in self.points()],
        }


def j1_part(x: Fraction, n: int) -> str:
    """Which piece of J_1 = (1/n, 1) x {0} the bottom point (x, 0) lies in."""
    x = Fraction(x)
    if not Fraction(1, n) < x < 1:
        raise ValueError(f"{x} is not in J_1")
    if x < Fraction(1, 2):
        return "check"
    if x < Fraction(n + 2, 2 * n):
        return "hat"
    return "tilde"


def boundary_classes(n: int, depth: int, denominators) -> list[CnPoint]:
    """Side classes I_k, J_k for k <= depth with rational parameters of the given denominators."""
    seen, out = set(), []
    for k in range(1, depth + 1):
        lo, hi = Fraction(1, n**k), Fraction(1, n ** (k - 1))
        for q in denominators:
            scale = q * n**k
            for p in range(scale * lo.numerator // lo.denominator, scale * hi.numerator // hi.denominator + 1):
                t = Fraction(p, scale)
                if lo < t < hi:
                    for z in (canonicalize(0, t, n), canonicalize(t, 0, n)):
                        if z.key not in seen:
                            seen.add(z.key)
                            out.append(z)
    return out


def _pair(v: Fraction) -> tuple[int, int]:
    return v.numerator, v.denominator


def exhaustive_factor_chain(n: int, max_length: int = 8, stop_after: int = 10) -> dict:
    """One sweep over the canonical bisequences checking both
    P_n o shift = B_n o P_n and Q o P_n o shift = T_n o Q o P_n (with T_n well-defined).
    """
    sides = {L: list(canonical_sides(n, L)) for L in range(1, max_length)}
    value, right_info = {}, {}
    for group in sides.values():
        for pre, per in group:
            value[pre, per] = _pair(expansion_value(n, pre, per))
    for group in sides.values():
        for pre, per in group:
            a1 = pre[0] if pre else per[0]
            dp, dq = (pre[1:], per) if pre else ((), per[1:] + per[:1])
            right_info[pre, per] = (value[pre, per], a1, _pair(expansion_value(n, dp, dq)))
    shifted_left: dict = {}
    checked, semi_fail, quot_fail = 0, [], []
    for left_len in range(1, max_length):
        for right_len in range(1, max_length - left_len + 1):
            for lside in sides[left_len]:
                y = value[lside]
                lpre, lper = lside
                for rside in sides[right_len]:
                    x, a1, x2 = right_info[rside]
                    y2 = shifted_left.get((lside, a1))
                    if y2 is None:
                        if not lpre and lper[-1] == a1:
                            y2 = _pair(expansion_value(n, (), (a1,) + lper[:-1]))
                        else:
                            y2 = _pair(expansion_value(n, (a1,) + lpre, lper))
                        shifted_left[lside, a1] = y2
                    key = ikey(n, x[0], x[1], y[0], y[1])
                    skey = ikey(n, x2[0], x2[1], y2[0], y2[1])
                    checked += 1
                    if skey != baker_key(n, key) and len(semi_fail) < stop_after:
                        semi_fail.append((lside, rside))
                    try:
                        ok = qkey(n, skey) == induced_key(n, qkey(n, key))
                    except WellDefinednessError:
                        ok = False
                    if not ok and len(quot_fail) < stop_after:
                        quot_fail.append((lside, rside))
    return {
        "base": n,
        "max_length": max_length,
        "checked": checked,
        "semiconjugacy_failures": semi_fail,
        "equivariance_failures": quot_fail,
    }


def rotation_respects_classes(z: CnPoint, limit: int = 12) -> bool:
    """Every member of z rotates into the single class rotate(z)."""
    from .chamanara import class_members

    target = rotate(z)
    return all(canonicalize(1 - a, 1 - b, z.base) == target for a, b in class_members(z, limit))


__all__ = [
    "INTERIOR",
    "SIDE_I",
    "SIDE_J",
    "BranchCatalog",
    "QnPoint",
    "WellDefinednessError",
    "boundary_classes",
    "canonicalize_q",
    "exhaustive_factor_chain",
    "fiber",
    "induced_apply",
    "j1_part",
    "rotate",
]
