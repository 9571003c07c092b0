import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from carpet import plot


@pytest.mark.parametrize("kind, data", [
    ("regions", {"lam": 2, "eps": Fraction(1, 10), "path": [(0.3, 0.01), (0.15, 0.02)]}),
    ("identification", {"n": 3}),
    ("orbit", {"points": [(Fraction(1, 3), Fraction(2, 3))]}),
    ("orbit", {}),
    ("ball", {"r_star": 0.05}),
])
def test_plots_are_wellformed_and_deterministic(kind, data):
    a, b = plot.render(kind, **data), plot.render(kind, **data)
    assert a == b
    root = ET.fromstring(a)
    assert root.tag.endswith("svg")


def test_empty_orbit_has_no_dots():
    svg = plot.render("orbit", points=[])
    assert "<circle" not in svg and "<line" in svg


def test_unknown_kind():
    with pytest.raises(ValueError):
        plot.render("pie")


def test_number_format():
    assert plot._f(1.23456) == "1.235"
    assert plot._f(-0.0001) == "0"
    assert plot._f(2.0) == "2"


def test_text_is_escaped():
    c = plot.Canvas(0, 1, 0, 1)
    c.text((0, 0), "a<b & c")
    assert "a&lt;b &amp; c" in c.render()


def test_write_atomic(tmp_path):
    p = tmp_path / "x.svg"
    plot.write_atomic(str(p), "one")
    plot.write_atomic(str(p), "two")
    assert p.read_text() == "two"
    assert [f.name for f in tmp_path.iterdir()] == ["x.svg"]
