import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from carpet.invlim import atlas as at
from carpet.invlim import falsify as fz
from carpet.invlim import zip as zp
from carpet.toral import CAT_MAP, ToralAuto, TorusPoint

ATLAS = at.default_atlas()


# -- atlas and metric ---------------------------------------------------------


def test_sign_of_surds():
    a = np.array([1, -3, 2, 0, 9, -9])
    b = np.array([0, 1, -1, 0, -4, 4])
    # 1, -3+2.236, 2-2.236, 0, 9-8.944, -9+8.944
    assert list(at.sign_surd5(a, b)) == [1, -1, -1, 0, 1, -1]


def test_eigenframe_is_orthonormal_and_diagonalizes():
    f = at.Eigenframe()
    assert f.e_c @ f.e_e == pytest.approx(0, abs=1e-15)
    M = np.array(CAT_MAP, float)
    assert M @ f.e_c == pytest.approx(f.e_c / f.lam)
    assert M @ f.e_e == pytest.approx(f.e_e * f.lam)
    assert f.lam == pytest.approx(at.PHI**2)


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_exact_sectors_agree_with_floats(x, y):
    f = at.Eigenframe()
    p, q = f.coords(float(x), float(y))
    sec = int(f.sector(np.array([x]), np.array([y]))[0])
    if x == 0 and y == 0:
        assert sec == 0
    elif abs(abs(p) - abs(q)) > 1e-9:
        expected = (1 if p > 0 else 3) if abs(p) > abs(q) else (2 if q > 0 else 4)
        assert sec == expected


def test_fixed_directions():
    dirs = at.fixed_directions(CAT_MAP)
    assert len(dirs) == 4
    for t in dirs:
        assert at.angle_dist(at.transport(CAT_MAP, t), t) < 1e-12
    assert any(at.angle_dist(t, at.contracting_angle(1)) < 1e-12 for t in dirs)
    assert at.angle_dist(at.contracting_angle(1), at.contracting_angle(-1)) == pytest.approx(math.pi)


def test_metric_between_the_two_special_points():
    z1, z2 = at.special_point(ATLAS, 1), at.special_point(ATLAS, -1)
    m = at.dinf(z1, z2)
    # d_0 = 0 and d_j = rho * pi = 1/2 for j = 1..3
    assert m.value == pytest.approx(7 / 24)
    assert m.tail == 1 / 8
    assert at.dinf(z1, z1).value == 0


def test_metric_on_the_third_coordinate():
    # second stage at the period-3 orbit: only coordinate 3 sees its circle
    a2 = at.blow_up(ATLAS, TorusPoint(Fraction(1, 5), Fraction(0)))
    assert a2.orbits[1].radius == pytest.approx(ATLAS.orbits[0].radius / 2)
    p = a2.orbits[1].points[0]
    u = at.LimPoint.lift(a2, p, depth=3, direction=0.0)
    v = at.LimPoint.lift(a2, p, depth=3, direction=math.pi)
    ds = [at.stage_dist(a2, j, a, b) for j, (a, b) in enumerate(zip(u.coords, v.coords))]
    assert ds[:2] == [0, 0]
    assert ds[2] == pytest.approx(0.25)


def test_lift_and_compatibility():
    z = at.LimPoint.lift(ATLAS, TorusPoint(Fraction(1, 3), Fraction(1, 7)))
    assert z.depth == 3 and z.base() == TorusPoint(Fraction(1, 3), Fraction(1, 7))
    with pytest.raises(at.AtlasError):
        at.LimPoint.lift(ATLAS, TorusPoint(0, 0))
    bad = at.LimPoint(ATLAS, (at.Coord(TorusPoint(0, 0), 1.0),) + z.coords[1:])
    with pytest.raises(at.AtlasError):
        bad.check()


def test_homeomorphism_moves_coordinates_compatibly():
    z = at.special_point(ATLAS, 1)
    w = at.h_apply(z)
    assert at.dinf(z, w).value < 1e-12
    y = at.LimPoint.lift(ATLAS, TorusPoint(Fraction(2, 9), Fraction(5, 9)))
    assert at.h_apply(at.h_apply(y), "inverse") == y


def test_blow_up_rules():
    with pytest.raises(at.AtlasError):
        at.blow_up(ATLAS, TorusPoint(0, 0))
    pillow = at.BlowupAtlas(ToralAuto(CAT_MAP), model="pillow")
    with pytest.raises(at.AtlasError):
        at.blow_up(pillow, TorusPoint(Fraction(1, 2), 0))
    p = at.blow_up(pillow, TorusPoint(0, Fraction(1, 4)))
    assert p.orbits[0].period == 3
    with pytest.raises(at.AtlasError):
        at.BlowupAtlas(ToralAuto(CAT_MAP), model="cone")


def test_vectorized_metric_matches_scalar():
    rng = np.random.default_rng(1)
    for sign in (1, -1):
        z = at.special_point(ATLAS, sign)
        for _ in range(20):
            dx, dy = (Fraction(int(v), 4096) for v in rng.integers(-200, 200, 2))
            y = at.LimPoint.lift(ATLAS, TorusPoint(dx, dy))
            vec = fz.dinf_over_fixed(ATLAS, sign, np.array([float(dx)]), np.array([float(dy)]), np.array([0.0]))
            assert vec[0] == pytest.approx(at.dinf(z, y).value, abs=1e-12)


# -- zip model ------------------------------------------------------------------


def test_zip_maps_fix_the_boundary_and_collapse_the_zip():
    model = zp.ZipModel()
    r = zp.zip_maps(model, 1 / 8, angles=1 << 10)
    assert r.boundary_max < 1e-12
    assert r.zip_image_diameter == 0
    assert r.bijective
    # the largest gap is at alpha = 0, where it equals delta
    assert r.grid_max == pytest.approx(1 / 8)
    assert r.pointwise_max <= r.certified


def test_zip_convergence():
    rep = zp.near_homeomorphism()
    assert rep.passed and rep.monotone
    # at delta = 2^-10 the gap is 0.000977 but the certificate adds about 3e-5
    assert rep.targets[1e-3] == 1 / 2**11
    assert rep.targets[1e-1] == 1 / 2**4
    with pytest.raises(ValueError):
        zp.zip_maps(zp.ZipModel(), 1.5)
    with pytest.raises(ValueError):
        zp.ZipModel(ell=2.5)


# -- falsifiers ---------------------------------------------------------------


def test_trace_helpers():
    assert fz.rle("ooo11z") == "o3 12 z1"
    assert fz.rle("") == ""
    sym = fz.region_symbol(np.array([0, 100, 1000]), np.array([0, -160, 0]), 10**5)
    assert list(sym) == ["z", "1", "o"]


def test_thresholds():
    th = fz.thresholds(ATLAS)
    assert th.box == pytest.approx(at.PHI**2 / 16)
    assert th.M == pytest.approx(1 / 8)
    assert th.r_quarter == pytest.approx(1 / 32)
    assert th.r_exact > th.r_quarter
    assert th.cone(1 / 32) <= math.pi / 4


def test_ball_check_small():
    r = fz.ball_projection_check(sign=1, samples=500, iterations=10)
    assert r.passed
    assert r.r_star >= fz.thresholds(ATLAS).r_quarter


def test_spec_falsifier_small():
    rep = fz.spec_falsify(N=3, res=9)
    assert rep.passed
    assert "not a proof" in rep.label
    with pytest.raises(ValueError):
        fz.spec_falsify(N=0)


def test_app_falsifier_small():
    rep = fz.app_falsify(n=100, res=8)
    with pytest.raises(ValueError):
        fz.app_falsify(n=50)
    assert rep.passed
    assert sum(rep.exclusions.values()) == rep.candidates
