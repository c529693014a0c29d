"""Boundary filling, semi-discrete tendencies, time stepping, and the driver."""

import logging

import numpy as np
import pytest

from adhyp import (
    BoundarySpec,
    Field,
    GasModel,
    Grid,
    SchemeConfig,
    compute_dt,
    dirichlet,
    fill_ghosts,
    free,
    periodic,
    rhs_1d,
    rhs_2d,
    run_to,
    ssprk3_step,
    wall,
)
from adhyp.euler import conserved_from_primitives
from adhyp.indicator import compute_tau_field
from adhyp.problems import get_problem, make_initial_field

AIR = GasModel(1.4)


def _field_1d(nx, rho, u, p, x_min=0.0, x_max=1.0):
    grid = Grid(nx, x_min, x_max)
    arr = np.zeros(grid.array_shape())
    g = grid.ghost
    arr[g : g + nx] = conserved_from_primitives(
        np.broadcast_to(rho, (nx,)).astype(float),
        np.broadcast_to(u, (nx,)).astype(float),
        np.broadcast_to(p, (nx,)).astype(float),
        AIR.gamma,
    )
    return Field(arr, grid)


# --- ghost filling ----------------------------------------------------------------


def test_free_ghosts_constant():
    f = _field_1d(8, 1.0, 0.5, 1.0)
    fill_ghosts(f.u, f.grid, BoundarySpec(free(), free()), AIR)
    assert np.array_equal(f.u[:3], np.tile(f.u[3], (3, 1)))
    assert np.array_equal(f.u[-3:], np.tile(f.u[-4], (3, 1)))


def test_wall_ghosts_mirror_momentum():
    f = _field_1d(8, 1.0, 0.5, 1.0)
    fill_ghosts(f.u, f.grid, BoundarySpec(wall(), wall()), AIR)
    g = f.grid.ghost
    # first ghost mirrors first interior with negated momentum
    assert f.u[g - 1, 0] == f.u[g, 0]
    assert f.u[g - 1, 1] == -f.u[g, 1]
    assert f.u[g - 1, 2] == f.u[g, 2]
    assert f.u[g - 3, 1] == -f.u[g + 2, 1]
    assert f.u[-1, 1] == -f.u[-6, 1]


def test_periodic_ghosts_wrap():
    f = _field_1d(8, 1.0, 0.1, 1.0)
    f.u[3:11, 0] = np.arange(8) + 1.0  # tag densities
    fill_ghosts(f.u, f.grid, BoundarySpec(periodic(), periodic()), AIR)
    assert f.u[2, 0] == f.u[10, 0]  # ghost j=-1 equals interior j=nx-1
    assert f.u[11, 0] == f.u[3, 0]
    assert f.u[0, 0] == f.u[8, 0]


def test_dirichlet_ghosts():
    f = _field_1d(8, 1.0, 0.1, 1.0)
    bc = BoundarySpec(dirichlet(2.0, 0.0, 3.0), free())
    fill_ghosts(f.u, f.grid, bc, AIR)
    expected = conserved_from_primitives(2.0, 0.0, 3.0, AIR.gamma)
    for i in range(3):
        assert f.u[i] == pytest.approx(expected, rel=1e-15)


def test_periodic_must_pair():
    with pytest.raises(ValueError):
        BoundarySpec(periodic(), free())


def test_2d_ghost_corners():
    grid = Grid(6, 0.0, 1.0, ny=6, y_min=0.0, y_max=1.0)
    u = np.zeros(grid.array_shape())
    g = grid.ghost
    prim = conserved_from_primitives(
        np.full((6, 6), 2.0), np.full((6, 6), 0.3), np.full((6, 6), 1.5),
        AIR.gamma, v=np.full((6, 6), -0.2),
    )
    u[g : g + 6, g : g + 6] = prim
    bc = BoundarySpec(wall(), free(), dirichlet(1.0, 0.0, 0.0, 2.5), free())
    fill_ghosts(u, grid, bc, AIR)
    # bottom band (including corners) carries the dirichlet state
    expected = conserved_from_primitives(1.0, 0.0, 2.5, AIR.gamma, v=0.0)
    assert u[0, 0] == pytest.approx(expected, rel=1e-15)
    assert u[2, -1] == pytest.approx(expected, rel=1e-15)
    # left wall mirrors x-momentum of the interior
    assert u[g + 1, g - 1, 1] == -u[g + 1, g, 1]
    # right free side copies the last interior column
    assert np.array_equal(u[g + 2, -1], u[g + 2, -4])


# --- right-hand sides ---------------------------------------------------------------


def _tau_for(field, cfg):
    return compute_tau_field(field.u[..., 0], cfg.indicator_config()).tau


def test_rhs_constant_field_is_zero():
    f = _field_1d(16, 1.0, 0.3, 1.0)
    cfg = SchemeConfig(strategy="new", C=0.01)
    fill_ghosts(f.u, f.grid, BoundarySpec(free(), free()), AIR)
    rhs, fb, _ = rhs_1d(f.u, _tau_for(f, cfg), f.grid, cfg)
    assert np.max(np.abs(f.grid.interior(rhs))) < 1e-14
    assert fb == 0


def test_rhs_stencil_locality(rng):
    # a single-cell bump influences the tendency only within +/-3 cells
    nx = 32
    cfg = SchemeConfig(strategy="new", C=0.01)
    bc = BoundarySpec(free(), free())
    base = _field_1d(nx, 1.0, 0.2, 1.0)
    fill_ghosts(base.u, base.grid, bc, AIR)
    r0, _, _ = rhs_1d(base.u, _tau_for(base, cfg), base.grid, cfg)

    bumped = _field_1d(nx, 1.0, 0.2, 1.0)
    j = 16
    bumped.u[bumped.grid.ghost + j, 0] *= 1.25
    fill_ghosts(bumped.u, bumped.grid, bc, AIR)
    r1, _, _ = rhs_1d(bumped.u, _tau_for(bumped, cfg), bumped.grid, cfg)

    diff = np.abs(base.grid.interior(r1) - base.grid.interior(r0)).max(axis=1)
    changed = np.nonzero(diff > 1e-13)[0]
    assert changed.size > 0
    assert changed.min() >= j - 3
    assert changed.max() <= j + 3


def test_rhs_telescoping_sum(rng):
    nx = 64
    grid = Grid(nx, 0.0, 1.0)
    arr = np.zeros(grid.array_shape())
    g = grid.ghost
    rho = 1.0 + 0.3 * rng.random(nx)
    vel = 0.2 * rng.standard_normal(nx)
    p = 1.0 + 0.3 * rng.random(nx)
    arr[g : g + nx] = conserved_from_primitives(rho, vel, p, AIR.gamma)
    f = Field(arr, grid)
    cfg = SchemeConfig(strategy="new", C=0.01)
    fill_ghosts(f.u, grid, BoundarySpec(free(), free()), AIR)
    rhs, _, flux = rhs_1d(f.u, _tau_for(f, cfg), grid, cfg)
    total = np.sum(grid.interior(rhs), axis=0) * grid.dx
    boundary = flux[0] - flux[-1]
    assert total == pytest.approx(boundary, rel=1e-12, abs=1e-12)


def test_rhs_2d_constant_zero_and_rt_source():
    grid = Grid(8, 0.0, 1.0, ny=8, y_min=0.0, y_max=1.0)
    u = np.zeros(grid.array_shape())
    g = grid.ghost
    u[g : g + 8, g : g + 8] = conserved_from_primitives(
        np.full((8, 8), 2.0), np.full((8, 8), 0.0), np.full((8, 8), 1.0),
        AIR.gamma, v=np.full((8, 8), -0.1),
    )
    bc = BoundarySpec(free(), free(), free(), free())
    fill_ghosts(u, grid, bc, AIR)
    cfg = SchemeConfig(strategy="fixed", fixed_tau=0.5, C=0.01)
    tau = compute_tau_field(u[..., 0], cfg.indicator_config()).tau
    rhs0, _, _, _ = rhs_2d(u, tau, grid, cfg, source="none")
    assert np.max(np.abs(grid.interior(rhs0))) < 1e-13
    rhs1, _, _, _ = rhs_2d(u, tau, grid, cfg, source="rt_gravity")
    inner = grid.interior(rhs1)
    assert inner[..., 2] == pytest.approx(2.0, rel=1e-13)  # rho
    assert inner[..., 3] == pytest.approx(-0.2, rel=1e-12)  # rho*v
    assert np.max(np.abs(inner[..., 0])) < 1e-13


def test_rhs_2d_matches_1d_per_row_bitwise(rng):
    nx, ny = 48, 6
    spec = get_problem("ex2")
    f1 = make_initial_field(spec, nx)
    gas = GasModel(spec.gamma)
    cfg = SchemeConfig(strategy="new", C=0.002, gamma=spec.gamma)
    fill_ghosts(f1.u, f1.grid, spec.bc, gas)
    tau1 = _tau_for(f1, cfg)
    r1, _, _ = rhs_1d(f1.u, tau1, f1.grid, cfg)

    grid2 = Grid(nx, spec.x_min, spec.x_max, ny=ny, y_min=0.0, y_max=1.0)
    u2 = np.zeros(grid2.array_shape())
    u2[..., 0] = f1.u[:, 0]
    u2[..., 1] = f1.u[:, 1]
    u2[..., 3] = f1.u[:, 2]
    tau2 = np.tile(tau1, (u2.shape[0], 1))
    r2, _, _, _ = rhs_2d(u2, tau2, grid2, cfg)
    i1 = f1.grid.interior(r1)
    i2 = grid2.interior(r2)
    for k in range(ny):
        assert np.array_equal(i2[k][:, [0, 1, 3]], i1)
        assert np.all(i2[k][:, 2] == 0.0)


# --- time stepping -----------------------------------------------------------------


def test_compute_dt_uniform():
    f = _field_1d(100, 1.0, 0.0, 1.0, x_max=1.0)
    fill_ghosts(f.u, f.grid, BoundarySpec(free(), free()), AIR)
    dt = compute_dt(f.u, f.grid, 0.4, AIR)
    assert dt == pytest.approx(0.4 * 0.01 / np.sqrt(1.4), rel=1e-15)


def test_compute_dt_speed_scaling():
    f1 = _field_1d(50, 1.0, 0.0, 1.0)
    f2 = _field_1d(50, 1.0, 0.0, 4.0)  # c doubles
    bc = BoundarySpec(free(), free())
    fill_ghosts(f1.u, f1.grid, bc, AIR)
    fill_ghosts(f2.u, f2.grid, bc, AIR)
    assert compute_dt(f2.u, f2.grid, 0.4, AIR) == compute_dt(f1.u, f1.grid, 0.4, AIR) / 2.0


def test_compute_dt_2d_reduces_to_1d():
    grid = Grid(20, 0.0, 1.0, ny=8, y_min=0.0, y_max=1.0)
    u = np.zeros(grid.array_shape())
    g = grid.ghost
    u[g : g + 8, g : g + 20] = conserved_from_primitives(
        np.full((8, 20), 1.0), np.full((8, 20), 0.2), np.full((8, 20), 1.0),
        AIR.gamma, v=np.zeros((8, 20)),
    )
    bc = BoundarySpec(free(), free(), free(), free())
    fill_ghosts(u, grid, bc, AIR)
    dt2 = compute_dt(u, grid, 0.4, AIR)
    # sy = c here (v = 0 but the acoustic fan is open), so combine manually
    c = np.sqrt(1.4)
    expected = 0.4 / ((0.2 + c) / grid.dx + c / grid.dy)
    assert dt2 == pytest.approx(expected, rel=1e-14)


def test_ssprk3_identity_operator():
    u = np.linspace(0.0, 1.0, 7)
    out = ssprk3_step(u.copy(), 0.05, lambda w: np.zeros_like(w))
    assert out == pytest.approx(u, rel=1e-15)


def test_ssprk3_scalar_ode_taylor():
    # one step of y' = -y from y = 1 equals the cubic Taylor truncation
    got = ssprk3_step(1.0, 0.1, lambda y: -y)
    expected = 1.0 - 0.1 + 0.005 - 0.1**3 / 6.0
    assert got == pytest.approx(expected, rel=1e-14)
    assert abs(got - np.exp(-0.1)) < 5e-6  # O(dt^4)


def test_ssprk3_upwind_monotone():
    # first-order upwind advection at CFL 0.4 creates no new extrema
    nx = 50
    a, dx = 1.0, 1.0 / 50
    u = np.where(np.arange(nx) < 25, 2.0, 1.0).astype(float)

    def L(w):
        return -(a / dx) * (w - np.roll(w, 1))

    out = ssprk3_step(u.copy(), 0.4 * dx / a, L)
    assert out.max() <= u.max() + 1e-14
    assert out.min() >= u.min() - 1e-14

    def tv(w):
        return np.sum(np.abs(np.diff(w))) + abs(w[0] - w[-1])

    assert tv(out) <= tv(u) + 1e-13


def test_rhs_linear_operator_linearity(rng):
    # the step combination is linear whenever the tendency operator is:
    # frozen-coefficient upwind transport as the stand-in operator
    nx = 40
    dx = 1.0 / nx
    speed = 0.7

    def L(w):
        return -(speed / dx) * (w - np.roll(w, 1))

    x = rng.standard_normal(nx)
    y = rng.standard_normal(nx)
    al, be = 0.7, -1.3
    lhs = L(al * x + be * y)
    rhs = al * L(x) + be * L(y)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)
    sl = ssprk3_step(al * x + be * y, 0.01, L)
    sr = al * ssprk3_step(x, 0.01, L) + be * ssprk3_step(y, 0.01, L)
    assert sl == pytest.approx(sr, rel=1e-11, abs=1e-11)


# --- the driver -------------------------------------------------------------------


def test_run_to_single_step_landing():
    spec = get_problem("smooth1d")
    f = make_initial_field(spec, 32)
    cfg = SchemeConfig(strategy="new", C=1.0, gamma=spec.gamma)
    fill_ghosts(f.u, f.grid, spec.bc, GasModel(spec.gamma))
    dt = compute_dt(f.u, f.grid, cfg.cfl, GasModel(spec.gamma))
    res = run_to(f, dt, cfg, spec.bc)
    assert len(res.stats) == 1
    assert res.t == dt


def test_run_to_exact_landing_and_snapshots():
    spec = get_problem("smooth1d")
    f = make_initial_field(spec, 32)
    cfg = SchemeConfig(strategy="new", C=1.0, gamma=spec.gamma)
    res = run_to(f, 0.1, cfg, spec.bc, snapshot_times=(0.03, 0.07))
    assert res.t == 0.1
    assert set(res.snapshots) == {0.03, 0.07, 0.1}
    assert not res.aborted


def test_run_to_periodic_conservation():
    spec = get_problem("smooth1d")
    f = make_initial_field(spec, 64)
    cfg = SchemeConfig(strategy="new", C=1.0, gamma=spec.gamma)
    before = np.sum(f.interior(), axis=0) * f.grid.dx
    res = run_to(f, 0.5, cfg, spec.bc)
    after = np.sum(res.field.interior(), axis=0) * f.grid.dx
    assert after == pytest.approx(before, rel=1e-12)


def test_run_to_smooth_advection_returns_profile():
    # one full period of exact profile transport at speed 1
    spec = get_problem("smooth1d")
    errs = []
    for nx in (64, 128):
        f = make_initial_field(spec, nx)
        cfg = SchemeConfig(strategy="fixed", fixed_tau=0.5, C=1.0, gamma=spec.gamma)
        res = run_to(f, 2.0 * np.pi, cfg, spec.bc)
        errs.append(
            float(np.mean(np.abs(res.field.interior()[:, 0] - f.interior()[:, 0])))
        )
    assert errs[1] < errs[0] / 2.5  # better than first order over the period


def test_run_to_abort_on_invalid_state():
    spec = get_problem("smooth1d")
    f = make_initial_field(spec, 32)
    f.u[f.grid.ghost + 5, 2] = 1e-12  # nearly zero energy: negative pressure soon
    cfg = SchemeConfig(strategy="new", C=1.0, gamma=spec.gamma)
    try:
        res = run_to(f, 0.1, cfg, spec.bc)
        assert res.aborted
        assert res.abort_reason
    except Exception as exc:  # initial validation may reject it outright
        assert "pressure" in str(exc) or "invalid" in str(exc)


def test_run_to_logs_machine_parseable(caplog):
    spec = get_problem("smooth1d")
    f = make_initial_field(spec, 32)
    cfg = SchemeConfig(strategy="new", C=1.0, gamma=spec.gamma)
    with caplog.at_level(logging.INFO, logger="adhyp"):
        run_to(f, 0.02, cfg, spec.bc, log_every=1)
    lines = [r.getMessage() for r in caplog.records]
    assert lines
    import re

    pat = re.compile(r"^step=\d+ t=[0-9.eE+-]+ dt=[0-9.eE+-]+ fallbacks=\d+$")
    assert all(pat.match(ln) for ln in lines)


def test_run_to_tau_refresh_modes_differ_slightly():
    spec = get_problem("ex2")
    f = make_initial_field(spec, 100)
    base = dict(strategy="new", C=0.002, gamma=spec.gamma)
    res_step = run_to(f, 0.2, SchemeConfig(tau_refresh="step", **base), spec.bc)
    res_stage = run_to(f, 0.2, SchemeConfig(tau_refresh="stage", **base), spec.bc)
    assert not res_step.aborted and not res_stage.aborted
    assert not np.array_equal(res_step.field.u, res_stage.field.u)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(2, 0.0, 1.0)
    with pytest.raises(ValueError):
        Grid(8, 1.0, 0.0)
    g = Grid(10, 0.0, 2.0)
    assert g.dx == 0.2
    assert g.ghost == 3
