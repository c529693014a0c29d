"""Limiter family: branch values, symmetry, bounds, and named specializations."""

import numpy as np
import pytest

from adhyp import LimiterParams, phi_sbm, slope_limited

MM2 = LimiterParams(theta=2.0, tau=0.5)


def minmod2_direct(r):
    """Independent minmod2: min{2r, (1+r)/2, 2} clipped at zero."""
    r = np.asarray(r, dtype=float)
    return np.maximum(0.0, np.minimum(np.minimum(2.0 * r, 0.5 * (1.0 + r)), 2.0))


def test_negative_ratio_vanishes():
    assert phi_sbm(-1.0, MM2) == 0.0
    assert phi_sbm(0.0, MM2) == 0.0


def test_unit_ratio_is_one():
    for theta in (1.0, 1.5, 2.0):
        for tau in (-0.25, 0.0, 0.3, 0.5):
            assert phi_sbm(1.0, LimiterParams(theta, tau)) == 1.0


def test_branch_values():
    assert phi_sbm(0.5, MM2) == pytest.approx(0.75, abs=0.0)
    assert phi_sbm(2.0, MM2) == pytest.approx(1.5, abs=0.0)
    assert phi_sbm(0.5, LimiterParams(2.0, -0.25)) == pytest.approx(1.0, abs=0.0)


def test_mirror_branch_matches_recursion():
    # for r > 1 the closed form equals r*phi(1/r) to round-off
    params = LimiterParams(2.0, -0.1)
    for r in (1.5, 2.0, 3.0, 7.3, 40.0):
        assert phi_sbm(r, params) == pytest.approx(r * phi_sbm(1.0 / r, params), rel=1e-14)


def test_symmetry_log_uniform(rng):
    r = np.exp(rng.uniform(np.log(1e-6), np.log(1e6), 10_000))
    for params in (MM2, LimiterParams(2.0, -0.25), LimiterParams(1.3, 0.1)):
        lhs = phi_sbm(r, params)
        rhs = r * phi_sbm(1.0 / r, params)
        assert np.max(np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1e-300)) < 1e-12


def test_bounds(rng):
    r = np.concatenate([rng.uniform(-5, 20, 5000), np.exp(rng.uniform(-14, 14, 5000))])
    for _ in range(30):
        params = LimiterParams(rng.uniform(1.0, 2.0), rng.uniform(-0.25, 0.5))
        vals = phi_sbm(r, params)
        assert np.all(vals >= 0.0)
        assert np.all(vals <= params.theta + 1e-15)


def test_monotone_in_tau_on_unit_interval(rng):
    taus = np.linspace(-0.25, 0.5, 16)
    for r in rng.uniform(0.01, 0.99, 50):
        vals = [phi_sbm(float(r), LimiterParams(2.0, t)) for t in taus]
        assert np.all(np.diff(vals) <= 1e-15)


def test_minmod2_equivalence_exact():
    r = np.linspace(-2.0, 10.0, 12_001)
    assert np.array_equal(phi_sbm(r, MM2), minmod2_direct(r))


def test_minmod2_equivalence_random_exact(rng):
    r = rng.uniform(-2.0, 10.0, 100_000)
    assert np.array_equal(phi_sbm(r, MM2), minmod2_direct(r))


def test_param_validation():
    with pytest.raises(ValueError):
        LimiterParams(theta=0.5)
    with pytest.raises(ValueError):
        LimiterParams(theta=2.5)
    with pytest.raises(ValueError):
        LimiterParams(tau=-0.3)
    with pytest.raises(ValueError):
        LimiterParams(tau=0.75)


# --- limited slopes ---------------------------------------------------------------


def test_slope_constant_data():
    assert slope_limited(3.0, 3.0, 3.0, 0.1, MM2) == 0.0


def test_slope_linear_data():
    assert slope_limited(0.0, 1.0, 2.0, 1.0, MM2) == 1.0


def test_slope_linear_exactness(rng):
    # exactly linear data reproduce the slope for any valid parameters
    for _ in range(50):
        a = rng.uniform(-5, 5)
        s = rng.uniform(-4, 4)
        dx = 10.0 ** rng.uniform(-4, 0)
        params = LimiterParams(rng.uniform(1, 2), rng.uniform(-0.25, 0.5))
        got = slope_limited(a - s * dx, a, a + s * dx, dx, params)
        assert got == pytest.approx(s, rel=1e-12, abs=1e-12)


def test_slope_branch_value():
    assert slope_limited(0.0, 1.0, 1.5, 1.0, MM2) == pytest.approx(0.75, abs=0.0)


def test_slope_flat_tail_guard():
    # backward difference at round-off level: slope must be exactly zero
    assert slope_limited(1.0, 1.0 + 1e-15, 2.0, 0.5, MM2) == 0.0


def test_slope_componentwise_vectors():
    prev = np.array([0.0, 3.0, 1.0])
    mid = np.array([1.0, 3.0, 1.0])
    nxt = np.array([2.0, 3.0, 1.5])
    got = slope_limited(prev, mid, nxt, 1.0, MM2)
    assert got == pytest.approx([1.0, 0.0, 0.0], abs=0.0)


def test_slope_requires_positive_dx():
    with pytest.raises(ValueError):
        slope_limited(0.0, 1.0, 2.0, 0.0, MM2)
