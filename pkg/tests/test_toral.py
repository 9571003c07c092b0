from fractions import Fraction

import mpmath
import pytest

from carpet import toral
from carpet.surd import QuadSurd

CAT = toral.ToralAuto(toral.CAT_MAP)


def test_cat_map_entropy():
    # log of the golden ratio squared, 0.96242365011920689...
    assert abs(float(toral.auto_entropy(CAT)) - 0.962423650119207) < 1e-14
    with mpmath.workdps(50):
        assert abs(toral.auto_entropy(CAT, 50) - 2 * mpmath.log(mpmath.phi)) < mpmath.mpf(10) ** -45


def test_leading_eigenvalue():
    assert CAT.leading == QuadSurd(Fraction(3, 2), Fraction(1, 2), 5)
    assert CAT.det == 1 and CAT.trace == 3


def test_rejects_non_hyperbolic():
    with pytest.raises(ValueError):
        toral.ToralAuto(((1, 1), (0, 1)))
    with pytest.raises(ValueError):
        toral.ToralAuto(((2, 0), (0, 1)))
    with pytest.raises(ValueError):
        toral.ToralAuto.parse("1,2,3")


def test_periods_on_the_fifth_grid():
    assert sorted(o.period for o in toral.periodic_points(CAT, 5)) == [1, 2, 2, 10, 10]


def test_grid_orbits_partition():
    orbits = toral.periodic_points(CAT, 7)
    pts = [p for o in orbits for p in o.points]
    assert len(pts) == len(set(pts)) == 49
    for o in orbits:
        assert toral.apply_auto(CAT, o.points[-1]) == o.points[0]


def test_smallest_blowup_orbit():
    o = toral.smallest_blowup_orbit(CAT)
    assert o.period == 3
    assert max(p.denominator for p in o.points) == 4
    assert not o.meets_branch()


def test_pillow_map_is_well_defined():
    for z in toral.grid_points(6):
        q = toral.pillowcase(z)
        assert toral.pillow_apply(CAT, q) == toral.pillowcase(toral.apply_auto(CAT, z))
        assert len(q.fiber()) == q.fiber_size


def test_inverse():
    z = toral.TorusPoint.parse("1/3, 2/7")
    assert toral.apply_auto(CAT, toral.apply_auto(CAT, z), "inverse") == z
