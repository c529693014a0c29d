"""Grids, boundary handling, semi-discrete right-hand sides, and time stepping."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidStateError, SolverAbort
from .euler import GasModel, conserved_from_primitives, primitives_from_conserved
from .flux import get_flux
from .indicator import IndicatorConfig, IndicatorField, compute_tau_field

log = logging.getLogger("adhyp")

GHOST = 3  # per side per direction; covers reconstruction (2) and indicator (3)


@dataclass(frozen=True)
class Grid:
    nx: int
    x_min: float
    x_max: float
    ny: int | None = None
    y_min: float = 0.0
    y_max: float = 0.0
    ghost: int = GHOST

    def __post_init__(self):
        if self.nx < 4:
            raise ValueError(f"need at least 4 cells per direction, got nx={self.nx}")
        if self.ny is not None and self.ny < 4:
            raise ValueError(f"need at least 4 cells per direction, got ny={self.ny}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        if self.ny is not None and not self.y_max > self.y_min:
            raise ValueError("y_max must exceed y_min")

    @property
    def ndim(self) -> int:
        return 1 if self.ny is None else 2

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def dy(self) -> float:
        if self.ny is None:
            raise ValueError("dy undefined on a 1-D grid")
        return (self.y_max - self.y_min) / self.ny

    def x_centers(self, with_ghosts: bool = False) -> np.ndarray:
        lo = -self.ghost if with_ghosts else 0
        hi = self.nx + self.ghost if with_ghosts else self.nx
        return self.x_min + (np.arange(lo, hi) + 0.5) * self.dx

    def y_centers(self, with_ghosts: bool = False) -> np.ndarray:
        lo = -self.ghost if with_ghosts else 0
        hi = self.ny + self.ghost if with_ghosts else self.ny
        return self.y_min + (np.arange(lo, hi) + 0.5) * self.dy

    def array_shape(self) -> tuple:
        ncomp = 3 if self.ny is None else 4
        if self.ny is None:
            return (self.nx + 2 * self.ghost, ncomp)
        return (self.ny + 2 * self.ghost, self.nx + 2 * self.ghost, ncomp)

    def interior(self, u: np.ndarray) -> np.ndarray:
        g = self.ghost
        if self.ny is None:
            return u[g : g + self.nx]
        return u[g : g + self.ny, g : g + self.nx]


@dataclass(frozen=True)
class SideBC:
    kind: str  # free | wall | periodic | dirichlet
    state: tuple | None = None  # primitive (rho, u[, v], p) for dirichlet

    def __post_init__(self):
        if self.kind not in ("free", "wall", "periodic", "dirichlet"):
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "dirichlet" and self.state is None:
            raise ValueError("dirichlet side needs a prescribed state")


def free() -> SideBC:
    return SideBC("free")


def wall() -> SideBC:
    return SideBC("wall")


def periodic() -> SideBC:
    return SideBC("periodic")


def dirichlet(*state) -> SideBC:
    return SideBC("dirichlet", tuple(float(s) for s in state))


@dataclass(frozen=True)
class BoundarySpec:
    left: SideBC
    right: SideBC
    bottom: SideBC | None = None
    top: SideBC | None = None

    def __post_init__(self):
        pairs = [(self.left, self.right), (self.bottom, self.top)]
        for a, b in pairs:
            if a is None and b is None:
                continue
            if (a.kind == "periodic") != (b.kind == "periodic"):
                raise ValueError("periodic boundaries must pair on opposing sides")


@dataclass(frozen=True)
class SchemeConfig:
    """Everything the scheme needs apart from the grid and boundaries."""

    strategy: str = "new"  # new | old | fixed
    fixed_tau: float = 0.5
    C: float = 0.01
    epsilon: float = 0.2
    theta: float = 2.0
    cfl: float = 0.4
    gamma: float = 1.4
    flux: str = "cu"
    tau_refresh: str = "step"  # step | stage
    first_order: bool = False  # debug: zero slopes everywhere

    def __post_init__(self):
        if self.tau_refresh not in ("step", "stage"):
            raise ValueError(f"tau_refresh must be 'step' or 'stage', got {self.tau_refresh!r}")
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        self.indicator_config()  # validates C/epsilon/strategy/fixed_tau
        GasModel(self.gamma)
        get_flux(self.flux)
        if not 1.0 <= self.theta <= 2.0:
            raise ValueError(f"theta must lie in [1, 2], got {self.theta}")

    def indicator_config(self) -> IndicatorConfig:
        return IndicatorConfig(
            C=self.C, epsilon=self.epsilon, strategy=self.strategy, fixed_tau=self.fixed_tau
        )

    def gas(self) -> GasModel:
        return GasModel(self.gamma)


@dataclass
class Field:
    u: np.ndarray
    grid: Grid

    def interior(self) -> np.ndarray:
        return self.grid.interior(self.u)

    def copy(self) -> "Field":
        return Field(self.u.copy(), self.grid)


@dataclass
class StepStats:
    dt: float
    max_speed_over_dx: float
    fallbacks: int
    wall_time: float
    slope_limits: int = 0


@dataclass
class RunResult:
    field: Field
    t: float
    stats: list
    snapshots: dict
    indicator: IndicatorField | None
    aborted: bool = False
    abort_reason: str = ""

    @property
    def total_fallbacks(self) -> int:
        return sum(s.fallbacks for s in self.stats)

    @property
    def total_slope_limits(self) -> int:
        return sum(s.slope_limits for s in self.stats)


# --- ghost filling -------------------------------------------------------------


def _fill_axis(u: np.ndarray, axis: int, g: int, n: int, lo: SideBC, hi: SideBC,
               mom_comp: int, gas: GasModel, ndim: int):
    sl = [slice(None)] * u.ndim

    def band(idx):
        s = list(sl)
        s[axis] = idx
        return tuple(s)

    if lo.kind == "periodic":
        u[band(slice(0, g))] = u[band(slice(n, n + g))]
        u[band(slice(n + g, n + 2 * g))] = u[band(slice(g, 2 * g))]
        return
    for side, bc in ((0, lo), (1, hi)):
        if bc.kind == "free":
            src = band(g if side == 0 else n + g - 1)
            dst = band(slice(0, g) if side == 0 else slice(n + g, n + 2 * g))
            u[dst] = np.expand_dims(u[src], axis)
        elif bc.kind == "wall":
            for i in range(g):
                src = band(g + i if side == 0 else n + g - 1 - i)
                dst = band(g - 1 - i if side == 0 else n + g + i)
                u[dst] = u[src]
                u[dst][..., mom_comp] *= -1.0
        elif bc.kind == "dirichlet":
            if ndim == 1:
                rho, vel, p = bc.state
                cons = conserved_from_primitives(rho, vel, p, gas.gamma)
            else:
                rho, ux, uy, p = bc.state
                cons = conserved_from_primitives(rho, ux, p, gas.gamma, v=uy)
            dst = band(slice(0, g) if side == 0 else slice(n + g, n + 2 * g))
            u[dst] = cons
        else:  # periodic handled above
            pass


def fill_ghosts(u: np.ndarray, grid: Grid, bc: BoundarySpec, gas: GasModel) -> np.ndarray:
    """Populate ghost layers in place (and return the array).

    free: copy of the nearest interior cell; wall: mirror with the normal
    momentum negated; dirichlet: the prescribed state everywhere in the
    band; periodic: wrap-around.  In 2-D the x sides fill first, then the
    y sides extend over the full width so corners are covered.
    """
    g = grid.ghost
    if grid.ny is None:
        _fill_axis(u, 0, g, grid.nx, bc.left, bc.right, 1, gas, 1)
        return u
    if bc.bottom is None or bc.top is None:
        raise ValueError("2-D boundaries need bottom/top sides")
    _fill_axis(u, 1, g, grid.nx, bc.left, bc.right, 1, gas, 2)
    _fill_axis(u, 0, g, grid.ny, bc.bottom, bc.top, 2, gas, 2)
    return u


# --- semi-discrete right-hand sides ---------------------------------------------


def _require_cu_kernel(cfg: SchemeConfig):
    fl = get_flux(cfg.flux)
    if not fl.uses_cu_kernel or getattr(fl, "anti_diffusion", None) is not None:
        raise NotImplementedError(
            f"flux {fl.name!r} carries a custom anti-diffusion; no compiled sweep exists yet"
        )


def rhs_1d(u: np.ndarray, tau: np.ndarray, grid: Grid, cfg: SchemeConfig,
           fb_mask=None, lim_mask=None, prim_out=None, rhs_out=None):
    """Flux-difference tendency; ghosts and tau must already be in place.

    Returns (rhs, fallbacks, flux) with rhs full-shaped (ghost entries zero)
    and flux holding the nx+1 interface fluxes; `fallbacks` counts interior
    cells whose reconstruction needed the positivity fallback.  `prim_out`
    optionally supplies (vel, pres) scratch arrays the sweep fills with the
    per-cell primitives.
    """
    _require_cu_kernel(cfg)
    if prim_out is None:
        vel = np.empty(u.shape[0])
        pres = np.empty(u.shape[0])
    else:
        vel, pres = prim_out
    flux = np.empty((grid.nx + 1, 3))
    rhs = np.zeros_like(u) if rhs_out is None else rhs_out
    if fb_mask is None:
        fb_mask = np.zeros(u.shape[0], dtype=np.uint8)
    if lim_mask is None:
        lim_mask = np.zeros(u.shape[0], dtype=np.uint8)
    _kernels.rhs_sweep_1d(
        u, vel, pres, tau, fb_mask, lim_mask, grid.ghost, grid.nx, grid.dx,
        cfg.gamma, cfg.theta, cfg.first_order, flux, rhs,
    )
    return rhs, int(np.count_nonzero(grid.interior(fb_mask))), flux


_SOURCE_IDS = {"none": 0, "rt_gravity": 1}


def rhs_2d(u: np.ndarray, tau: np.ndarray, grid: Grid, cfg: SchemeConfig,
           source: str = "none", fb_mask=None, lim_mask=None, prim_out=None,
           rhs_out=None):
    """2-D tendency from both directional sweeps plus the optional gravity source."""
    _require_cu_kernel(cfg)
    if prim_out is None:
        velx = np.empty(u.shape[:2])
        vely = np.empty(u.shape[:2])
        pres = np.empty(u.shape[:2])
    else:
        velx, vely, pres = prim_out
    fx = np.empty((grid.ny, grid.nx + 1, 4))
    fy = np.empty((grid.ny + 1, grid.nx, 4))
    rhs = np.zeros_like(u) if rhs_out is None else rhs_out
    if fb_mask is None:
        fb_mask = np.zeros(u.shape[:2], dtype=np.uint8)
    if lim_mask is None:
        lim_mask = np.zeros(u.shape[:2], dtype=np.uint8)
    _kernels.rhs_sweep_2d(
        u, velx, vely, pres, tau, fb_mask, lim_mask, grid.ghost, grid.nx,
        grid.ny, grid.dx, grid.dy, cfg.gamma, cfg.theta, cfg.first_order,
        _SOURCE_IDS[source], fx, fy, rhs,
    )
    return rhs, int(np.count_nonzero(grid.interior(fb_mask))), fx, fy


def max_signal_speeds(u: np.ndarray, grid: Grid, gas: GasModel, prims=None):
    """Largest one-sided speeds per direction, from cell-average interface fans."""
    if prims is None:
        prims = primitives_from_conserved(u, gas.gamma)
    if grid.ny is None:
        rho, vel, pres = prims
        return _kernels.max_speed_1d(vel, pres, rho, grid.ghost, grid.nx, gas.gamma), 0.0
    rho, velx, vely, pres = prims
    sx, sy = _kernels.max_speed_2d(
        velx, vely, pres, rho, grid.ghost, grid.nx, grid.ny, gas.gamma
    )
    return sx, sy


def compute_dt(u: np.ndarray, grid: Grid, cfl: float, gas: GasModel, prims=None) -> float:
    """CFL time step; directions combine as cfl / (sx/dx + sy/dy) in 2-D."""
    sx, sy = max_signal_speeds(u, grid, gas, prims=prims)
    if grid.ny is None:
        if sx <= 0.0:
            return cfl * grid.dx
        return cfl * grid.dx / sx
    q = sx / grid.dx + sy / grid.dy
    if q <= 0.0:
        return cfl * min(grid.dx, grid.dy)
    return cfl / q


def ssprk3_step(u, dt, L):
    """One strong-stability-preserving RK3 step of du/dt = L(u).

    Stage arrays returned by L are consumed in place; `u` itself is never
    mutated.  The update values equal the textbook combinations
    u1 = u + dt L(u); u2 = 3/4 u + 1/4 (u1 + dt L(u1));
    u_new = 1/3 u + 2/3 (u2 + dt L(u2)).
    """
    fast = isinstance(u, np.ndarray) and u.dtype == np.float64
    if fast:
        uf = np.ascontiguousarray(u).reshape(-1)
        k = L(u)
        kf = k.reshape(-1)
        _kernels.combine_fma(kf, dt, uf)
        u1 = k
        k = L(u1)
        kf = k.reshape(-1)
        _kernels.combine_fma(kf, dt, u1.reshape(-1))
        _kernels.combine_weighted(kf, 0.25, 0.75, uf)
        u2 = k
        k = L(u2)
        kf = k.reshape(-1)
        _kernels.combine_fma(kf, dt, u2.reshape(-1))
        _kernels.combine_third(kf, 2.0 / 3.0, uf)
        return k
    k = L(u)
    k = k * dt + u
    u1 = k
    k = L(u1)
    k = (k * dt + u1) * 0.25 + 0.75 * u
    u2 = k
    k = L(u2)
    k = (k * dt + u2) * (2.0 / 3.0) + u / 3.0
    return k


def validate_interior(u: np.ndarray, grid: Grid, gamma: float):
    """Raise InvalidStateError at the first non-finite or non-positive cell."""
    inner = grid.interior(u)
    prim = primitives_from_conserved(inner, gamma)
    rho, p = prim[0], prim[-1]
    bad = ~(np.isfinite(rho) & np.isfinite(p) & (rho > 0.0) & (p > 0.0))
    if bad.any():
        idx = np.unravel_index(np.argmax(bad), bad.shape)
        cell = idx[0] if len(idx) == 1 else tuple(int(i) for i in idx)
        raise InvalidStateError(
            f"invalid state rho={rho[idx]!r} p={p[idx]!r}", cell=cell,
            state=tuple(inner[idx]),
        )


def run_to(
    field: Field,
    t_end: float,
    cfg: SchemeConfig,
    bc: BoundarySpec,
    *,
    source: str = "none",
    snapshot_times=(),
    t0: float = 0.0,
    log_every: int = 0,
    max_steps: int | None = None,
) -> RunResult:
    """Advance to t_end exactly, landing on every snapshot time by dt clipping.

    The limiter parameter field refreshes once per step before stage one
    (default) or once per stage.  A stage that produces an invalid state, or
    a dt underflow, aborts the run; the history collected so far is returned
    with `aborted` set instead of raising.  Per step, StepStats.slope_limits
    counts interior cells whose slope was rescaled to keep the in-cell
    profile admissible, and StepStats.fallbacks those that additionally
    needed the emergency chain (dissipative slopes, then the flat average).
    """
    grid = field.grid
    gas = cfg.gas()
    icfg = cfg.indicator_config()
    u = field.u.copy()
    validate_interior(u, grid, cfg.gamma)

    targets = sorted({float(s) for s in snapshot_times} | {float(t_end)})
    targets = [s for s in targets if t0 < s <= t_end]
    snap_set = set(targets)

    t = float(t0)
    step = 0
    stats: list[StepStats] = []
    snapshots: dict[float, np.ndarray] = {}
    ind: IndicatorField | None = None
    aborted = False
    reason = ""
    per_step = cfg.tau_refresh == "step"
    fixed_ind = None  # fixed-strategy tau never changes; build it once
    if grid.ny is None:
        vel_buf = np.empty(u.shape[0])
        pres_buf = np.empty(u.shape[0])
    else:
        velx_buf = np.empty(u.shape[:2])
        vely_buf = np.empty(u.shape[:2])
        pres2_buf = np.empty(u.shape[:2])
    # two tendency buffers alternate across stages; their ghost entries are
    # never consumed (ghost layers are refilled before every use)
    rhs_bufs = (np.zeros_like(u), np.zeros_like(u))

    while t < t_end:
        tic = time.perf_counter()
        fill_ghosts(u, grid, bc, gas)
        if cfg.strategy == "fixed":
            if fixed_ind is None:
                fixed_ind = compute_tau_field(u[..., 0], icfg)
            ind = fixed_ind
        else:
            ind = compute_tau_field(u[..., 0], icfg)
        dt_cfl = compute_dt(u, grid, cfg.cfl, gas)
        nxt = next(s for s in targets if s > t)
        if t + dt_cfl >= nxt:
            dt = nxt - t
            landed = nxt
        else:
            dt = dt_cfl
            landed = None
        if not dt > 1e-13 * t_end:
            aborted = True
            reason = f"dt underflow: dt={dt!r} at t={t!r}"
            break

        mask_shape = u.shape[0] if grid.ny is None else u.shape[:2]
        step_mask = np.zeros(mask_shape, dtype=np.uint8)
        step_lim = np.zeros(mask_shape, dtype=np.uint8)
        stage_no = 0

        def L(w):
            # the sweep fills the primitive scratch; an invalid stage state
            # surfaces there as non-positive/NaN values, detected before the
            # tendency is combined into the solution
            nonlocal stage_no
            stage_no += 1
            fill_ghosts(w, grid, bc, gas)
            tau = ind.tau if per_step else compute_tau_field(w[..., 0], icfg).tau
            if grid.ny is None:
                r, _, _ = rhs_1d(w, tau, grid, cfg, fb_mask=step_mask,
                                 lim_mask=step_lim, prim_out=(vel_buf, pres_buf),
                                 rhs_out=rhs_bufs[stage_no % 2])
                bad = _kernels.first_invalid_1d(w[..., 0], pres_buf, grid.ghost, grid.nx)
                cell = bad
            else:
                r, _, _, _ = rhs_2d(w, tau, grid, cfg, source=source,
                                    fb_mask=step_mask, lim_mask=step_lim,
                                    prim_out=(velx_buf, vely_buf, pres2_buf),
                                    rhs_out=rhs_bufs[stage_no % 2])
                bad = _kernels.first_invalid_2d(w[..., 0], pres2_buf, grid.ghost,
                                                grid.nx, grid.ny)
                cell = (bad // grid.nx, bad % grid.nx) if bad >= 0 else -1
            if bad >= 0:
                raise SolverAbort(
                    "invalid stage state", t=t, step=step, stage=stage_no,
                    cell=cell, state=tuple(grid.interior(w)[cell]),
                )
            return r

        try:
            u_new = ssprk3_step(u, dt, L)
            if grid.ny is None:
                _kernels.fill_prims_1d(u_new, vel_buf, pres_buf, cfg.gamma)
                bad = _kernels.first_invalid_1d(u_new[..., 0], pres_buf,
                                                grid.ghost, grid.nx)
                cell = bad
            else:
                _kernels.fill_prims_2d(u_new, velx_buf, vely_buf, pres2_buf, cfg.gamma)
                bad = _kernels.first_invalid_2d(u_new[..., 0], pres2_buf,
                                                grid.ghost, grid.nx, grid.ny)
                cell = (bad // grid.nx, bad % grid.nx) if bad >= 0 else -1
            if bad >= 0:
                raise SolverAbort(
                    "invalid state after step", t=t, step=step,
                    cell=cell, state=tuple(grid.interior(u_new)[cell]),
                )
        except SolverAbort as exc:
            aborted = True
            reason = str(exc)
            break

        u = u_new
        # the committed state aliases a tendency buffer; retire that buffer
        # from the pool so later sweeps cannot write into the live solution
        if u is rhs_bufs[0]:
            rhs_bufs = (np.empty_like(u), rhs_bufs[1])
        elif u is rhs_bufs[1]:
            rhs_bufs = (rhs_bufs[0], np.empty_like(u))
        t = landed if landed is not None else t + dt
        step += 1
        fb_count = int(np.count_nonzero(grid.interior(step_mask)))
        lim_count = int(np.count_nonzero(grid.interior(step_lim)))
        # dt_cfl = cfl / (combined signal speed per width), so invert it back
        stats.append(
            StepStats(dt, cfg.cfl / dt_cfl, fb_count, time.perf_counter() - tic,
                      slope_limits=lim_count)
        )
        if landed is not None and landed in snap_set:
            fill_ghosts(u, grid, bc, gas)
            snapshots[landed] = u.copy()
        if log_every and (step % log_every == 0 or t >= t_end):
            log.info("step=%d t=%.12g dt=%.12g fallbacks=%d", step, t, dt, fb_count)
        if max_steps is not None and step >= max_steps:
            break

    fill_ghosts(u, grid, bc, gas)
    return RunResult(Field(u, grid), t, stats, snapshots, ind, aborted, reason)
