"""Deterministic SVG diagrams.

Coordinates are written with a fixed number of decimals and elements are
emitted in a fixed order, so identical input gives identical bytes.
"""

from __future__ import annotations

import math
import os
import tempfile
from fractions import Fraction

SIZE = 480
PAD = 40
COLORS = {
    "D1": "#f4a582",
    "D2": "#92c5de",
    "D3": "#d6604d",
    "D4": "#4393c3",
    "E": "#bababa",
    "I": "#1b7837",
    "J": "#762a83",
    "orbit": "#000000",
}


def _f(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class Canvas:
    """Maps a data box [x0, x1] x [y0, y1] onto the square drawing area (y up)."""

    def __init__(self, x0, x1, y0, y1, title=""):
        self.box = (float(x0), float(x1), float(y0), float(y1))
        self.items: list[str] = []
        self.title = title

    def xy(self, x, y):
        x0, x1, y0, y1 = self.box
        w = SIZE - 2 * PAD
        return PAD + (float(x) - x0) / (x1 - x0) * w, SIZE - PAD - (float(y) - y0) / (y1 - y0) * w

    def polygon(self, pts, fill, opacity=1.0):
        coords = " ".join(f"{_f(a)},{_f(b)}" for a, b in (self.xy(*p) for p in pts))
        self.items.append(f'<polygon points="{coords}" fill="{fill}" fill-opacity="{_f(opacity)}" stroke="none"/>')

    def line(self, p, q, color="#000000", width=1.0, dash=None):
        (a, b), (c, d) = self.xy(*p), self.xy(*q)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(
            f'<line x1="{_f(a)}" y1="{_f(b)}" x2="{_f(c)}" y2="{_f(d)}" stroke="{color}" stroke-width="{_f(width)}"{extra}/>'
        )

    def polyline(self, pts, color="#000000", width=1.0):
        coords = " ".join(f"{_f(a)},{_f(b)}" for a, b in (self.xy(*p) for p in pts))
        self.items.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="{_f(width)}"/>')

    def dot(self, p, r=2.0, color="#000000"):
        a, b = self.xy(*p)
        self.items.append(f'<circle cx="{_f(a)}" cy="{_f(b)}" r="{_f(r)}" fill="{color}"/>')

    def text(self, p, s, size=11, color="#000000"):
        a, b = self.xy(*p)
        self.items.append(f'<text x="{_f(a)}" y="{_f(b)}" font-size="{size}" fill="{color}">{_escape(s)}</text>')

    def axes(self):
        x0, x1, y0, y1 = self.box
        self.line((x0, y0), (x1, y0), "#888888")
        self.line((x0, y0), (x0, y1), "#888888")
        self.text((x0, y0 - (y1 - y0) * 0.06), _f(x0), 10, "#555555")
        self.text((x1, y0 - (y1 - y0) * 0.06), _f(x1), 10, "#555555")
        self.text((x0 - (x1 - x0) * 0.07, y1), _f(y1), 10, "#555555")

    def render(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
            f'viewBox="0 0 {SIZE} {SIZE}">\n<rect width="{SIZE}" height="{SIZE}" fill="#ffffff"/>\n'
        )
        title = f'<text x="{PAD}" y="{PAD // 2}" font-size="13">{_escape(self.title)}</text>\n' if self.title else ""
        return head + title + "\n".join(self.items) + "\n</svg>\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def region_plot(lam, eps, path=None) -> str:
    """Box D with its four sectors, the band E, and optionally an orbit path in (p, q) coordinates."""
    r = float(lam) * float(eps)
    e = float(eps)
    c = Canvas(-1.25 * r, 1.25 * r, -1.25 * r, 1.25 * r, f"sectors of D, lam={lam}, eps={eps}")
    o = (0, 0)
    c.polygon([o, (r, -r), (r, r)], COLORS["D1"])
    c.polygon([o, (r, r), (-r, r)], COLORS["D2"])
    c.polygon([o, (-r, r), (-r, -r)], COLORS["D3"])
    c.polygon([o, (-r, -r), (r, -r)], COLORS["D4"])
    # E is D minus the open square (-eps, eps)^2: draw it as four strips
    for strip in (
        [(-r, e), (r, e), (r, r), (-r, r)],
        [(-r, -r), (r, -r), (r, -e), (-r, -e)],
        [(e, -e), (r, -e), (r, e), (e, e)],
        [(-r, -e), (-e, -e), (-e, e), (-r, e)],
    ):
        c.polygon(strip, COLORS["E"], 0.55)
    c.line((-r, 0), (r, 0), "#444444", 0.8, "4,3")
    c.line((0, -r), (0, r), "#444444", 0.8, "4,3")
    for lab, p in (("D1", (0.6 * r, 0)), ("D2", (0, 0.6 * r)), ("D3", (-0.7 * r, 0)), ("D4", (0, -0.7 * r))):
        c.text(p, lab)
    if path:
        c.polyline([(float(p), float(q)) for p, q in path], COLORS["orbit"], 1.2)
        for p, q in path:
            c.dot((float(p), float(q)), 2.2)
    c.axes()
    return c.render()


def identification_plot(n: int, depth: int = 4) -> str:
    """The unit square with the side intervals I_k (left/right) and J_k (bottom/top) marked."""
    c = Canvas(0, 1, 0, 1, f"identifications, n={n}")
    c.polygon([(0, 0), (1, 0), (1, 1), (0, 1)], "#f7f7f7")
    for k in range(1, depth + 1):
        lo, hi = Fraction(1, n**k), Fraction(1, n ** (k - 1))
        off = 1 - Fraction(1, n ** (k - 1)) - Fraction(1, n**k)
        width = 3.0 if k % 2 else 1.5
        c.line((0, lo), (0, hi), COLORS["I"], width)
        c.line((1, lo + off), (1, hi + off), COLORS["I"], width)
        c.line((lo, 0), (hi, 0), COLORS["J"], width)
        c.line((lo + off, 1), (hi + off, 1), COLORS["J"], width)
        c.text((-0.07, float(lo + hi) / 2), f"I{k}", 10, COLORS["I"])
        c.text((1.02, float(lo + hi + 2 * off) / 2), f"I{k}", 10, COLORS["I"])
        c.text((float(lo + hi) / 2, -0.05), f"J{k}", 10, COLORS["J"])
        c.text((float(lo + hi + 2 * off) / 2, 1.02), f"J{k}", 10, COLORS["J"])
    for k in range(1, depth + 2):
        t = 1 / n**k
        for p in ((0, t), (t, 0), (1, 1 - t), (1 - t, 1)):
            c.dot(p, 2.5, "#b2182b")
    for p in ((0, 0), (1, 0), (0, 1), (1, 1)):
        c.dot(p, 3.0, "#b2182b")
    return c.render()


def orbit_plot(points, title="orbit") -> str:
    """Points in the unit square; an empty orbit gives axes only."""
    c = Canvas(0, 1, 0, 1, title)
    c.axes()
    for x, y in points:
        c.dot((float(x), float(y)), 1.6, COLORS["orbit"])
    return c.render()


def ball_plot(r_star: float, rho: float, samples=()) -> str:
    """The sector D1 around +e_c with the ball radius drawn as a circle (base coordinates)."""
    from .invlim.atlas import Eigenframe

    F = Eigenframe()
    R = 1.5 * r_star
    c = Canvas(-R, R, -R, R, f"ball projection, r*={r_star:.4f}")
    for sgn, col in ((1, COLORS["D1"]), (-1, COLORS["D3"])):
        a = math.atan2(F.e_c[1] * sgn, F.e_c[0] * sgn)
        wedge = [(0, 0)] + [(2 * R * math.cos(a + t), 2 * R * math.sin(a + t)) for t in (-math.pi / 4, 0, math.pi / 4)]
        c.polygon(wedge, col, 0.6)
    circle = [(r_star * math.cos(2 * math.pi * i / 96), r_star * math.sin(2 * math.pi * i / 96)) for i in range(97)]
    c.polyline(circle, "#000000", 1.0)
    for x, y in samples:
        c.dot((x, y), 1.0, "#333333")
    c.axes()
    return c.render()


KINDS = ("regions", "identification", "orbit", "ball")


def render(kind: str, **data) -> str:
    if kind == "regions":
        return region_plot(data.get("lam", 2), data.get("eps", Fraction(1, 10)), data.get("path"))
    if kind == "identification":
        return identification_plot(int(data.get("n", 3)), int(data.get("depth", 4)))
    if kind == "orbit":
        return orbit_plot(data.get("points", []), data.get("title", "orbit"))
    if kind == "ball":
        return ball_plot(float(data["r_star"]), float(data.get("rho", 0.16)), data.get("samples", ()))
    raise ValueError(f"unknown plot kind {kind!r}; choose from {', '.join(KINDS)}")


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)
