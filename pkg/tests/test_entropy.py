import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from carpet import entropy as en
from carpet.symbolic import ProbabilityVector


def brute_pairs(system, window, eps):
    traj = system.trajectory(window)
    D = system.denominator
    out = set()
    for i in range(system.size):
        for j in range(system.size):
            ok = True
            for c in traj:
                d = np.abs(c[i] - c[j])
                if system.wrap:
                    d = np.minimum(d, D - d)
                ok &= Fraction(int((d * d).sum()), D * D) <= eps * eps
            if ok:
                out.add((i, j))
    return out


def brute_cover(system, window, eps):
    pairs = brute_pairs(system, window, eps)
    N = system.size
    balls = [{j for (i, j) in pairs if i == c} for c in range(N)]
    for k in range(1, N + 1):
        for centers in itertools.combinations(range(N), k):
            if len(set().union(*(balls[c] for c in centers))) == N:
                return k


def test_bernoulli_entropy():
    half = ProbabilityVector((Fraction(1, 2), Fraction(1, 2)))
    with mpmath.workdps(40):
        assert abs(en.bernoulli_entropy(half) - mpmath.log(2)) < mpmath.mpf(10) ** -35
    skew = ProbabilityVector((Fraction(1, 4), Fraction(3, 4), Fraction(0)))
    expected = -(0.25 * math.log(0.25) + 0.75 * math.log(0.75))
    assert abs(float(en.bernoulli_entropy(skew)) - expected) < 1e-15


@pytest.mark.parametrize("h", ["0.1", "1", "1.0986122886681098", "5", "0.6931471805599453"])
def test_realize_entropy(h):
    r = en.realize_entropy(mpmath.mpf(h), tol=1e-12)
    assert abs(r.achieved - r.h) <= 1e-12
    assert len(r.P) == r.N
    assert mpmath.log(r.N - 1) < r.h <= mpmath.log(r.N) + 1e-12 or r.N == 2


def test_symbol_rules():
    with mpmath.workdps(40):
        assert en.choose_symbols(mpmath.log(3)) == 3
    # a 15-digit log 3 rounds up past the 40-digit one, so it needs 4 symbols at tol 0
    assert en.choose_symbols(1.0986122886681098, tol=1e-12) == 3
    assert en.choose_symbols(5) == 149
    assert en.choose_symbols(5, "bracket") >= en.choose_symbols(5)
    with pytest.raises(ValueError):
        en.choose_symbols(0)
    with pytest.raises(ValueError):
        en.choose_symbols(1, "bogus")


def test_bowen_pairs_match_brute_force():
    sysm = en.TorusSystem(q=8)
    got = {tuple(map(int, p)) for p in en.bowen_pairs(sysm, 3, Fraction(1, 4))}
    assert got == brute_pairs(sysm, 3, Fraction(1, 4))
    ident = en.IdentitySystem(4)
    got = {tuple(map(int, p)) for p in en.bowen_pairs(ident, 2, Fraction(1, 3))}
    assert got == brute_pairs(ident, 2, Fraction(1, 3))


@pytest.mark.parametrize("system, window, eps", [
    (en.IdentitySystem(2), 1, Fraction(1, 2)),
    (en.IdentitySystem(3), 1, Fraction(1, 3)),
    (en.TorusSystem(q=4), 2, Fraction(1, 2)),
])
def test_spanning_number_is_the_minimum_cover(system, window, eps):
    r = en.spanning_number(system, window, eps)
    assert r.exact
    assert r.upper == brute_cover(system, window, eps)


def test_shift_cylinders():
    s = en.ShiftSample(2, 10)
    # window n at radius 2^-k sees n + 2k - 1 free digits
    assert s.bowen_count(3, 2) == 2**6
    r = en.spanning_number(s, 3, Fraction(1, 4))
    assert (r.lower, r.upper, r.method) == (64, 64, "cylinders")
    with pytest.raises(ValueError):
        en.spanning_number(s, 3, Fraction(1, 3))
    with pytest.raises(ValueError):
        s.bowen_count(10, 2)


def test_identity_has_zero_growth():
    rep = en.entropy_estimate(en.IdentitySystem(6), Fraction(1, 6), [0, 1, 2, 3, 4])
    assert rep.value == 0


def test_full_shift_growth_is_log_two():
    rep = en.entropy_estimate(en.ShiftSample(2, 16), Fraction(1, 16), list(range(9)))
    assert rep.value == pytest.approx(math.log(2))


def test_growth_proxy():
    assert en.growth_proxy([0, 1, 2, 3, 4], [1, 2, 4, 8, 16]) == pytest.approx(math.log(2))
    assert en.growth_proxy([0, 1], [1, 3]) == pytest.approx(math.log(3))
    with pytest.raises(ValueError):
        en.growth_proxy([1], [2])


def test_saturated_windows_are_dropped():
    rep = en.entropy_estimate(en.ShiftSample(2, 6), Fraction(1, 2), list(range(12)))
    assert rep.parameters["windows_used"][-1] < 11
    assert rep.series[-1]["upper"] == 2**6


def test_quotient_sample_is_smaller():
    b, q = en.BakerSystem(2, 6), en.QuotientSystem(2, 6)
    assert q.size < b.size
    assert en.spanning_number(q, 2, Fraction(1, 4)).upper <= en.spanning_number(b, 2, Fraction(1, 4)).upper
