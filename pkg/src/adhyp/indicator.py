"""Smoothness indication on the density field and the per-cell tau selection.

The raw indicator is the ratio of second differences to noise-filtered first
differences (1-D), or the square-root analog built from both directions
(2-D).  A local average smooths it, and one of three strategies maps the
result to the limiter parameter tau:

* ``new``  - continuous tanh transition between -0.25 and 0.5 around C,
* ``old``  - discrete switch: -0.25 where the indicator exceeds C, else 0.5,
* ``fixed`` - constant tau, bypassing the indicator entirely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_STRATEGIES = ("new", "old", "fixed")


@dataclass(frozen=True)
class IndicatorConfig:
    C: float = 0.01
    epsilon: float = 0.2
    strategy: str = "new"
    fixed_tau: float = 0.5

    def __post_init__(self):
        if not self.C > 0.0:
            raise ValueError(f"adaption constant C must be positive, got {self.C}")
        if not self.epsilon > 0.0:
            raise ValueError(f"noise filter epsilon must be positive, got {self.epsilon}")
        if self.strategy not in _STRATEGIES:
            raise ValueError(f"strategy must be one of {_STRATEGIES}, got {self.strategy!r}")
        if not -0.25 <= self.fixed_tau <= 0.5:
            raise ValueError(f"fixed tau must lie in [-0.25, 0.5], got {self.fixed_tau}")


@dataclass(frozen=True)
class IndicatorField:
    """Raw values E, averaged values E_bar, and per-cell tau.

    Arrays are full-grid shaped (ghosts included).  The outermost cell on
    each side of E and the outermost two of E_bar/tau lack a complete
    stencil and hold zeros; the solver only reads tau on the interior plus
    one ghost layer, which is always covered.
    """

    E: np.ndarray
    E_bar: np.ndarray
    tau: np.ndarray


def si_raw_1d(rho: np.ndarray, epsilon: float) -> np.ndarray:
    """Raw indicator: |second difference| over filtered first differences."""
    rho = np.asarray(rho, dtype=float)
    E = np.zeros_like(rho)
    num = np.abs(rho[2:] - 2.0 * rho[1:-1] + rho[:-2])
    den = (
        np.abs(rho[2:] - rho[1:-1])
        + np.abs(rho[1:-1] - rho[:-2])
        + epsilon * (np.abs(rho[2:]) + 2.0 * np.abs(rho[1:-1]) + np.abs(rho[:-2]))
    )
    nonzero = den > 0.0
    E[1:-1] = np.where(nonzero, num / np.where(nonzero, den, 1.0), 0.0)
    return E


def si_smooth_1d(E: np.ndarray) -> np.ndarray:
    """1-4-1 weighted average (weights sum to one)."""
    E = np.asarray(E, dtype=float)
    out = np.zeros_like(E)
    out[1:-1] = (E[2:] + 4.0 * E[1:-1] + E[:-2]) / 6.0
    return out


def si_raw_2d(rho: np.ndarray, epsilon: float) -> np.ndarray:
    """2-D raw indicator sqrt(E1/E2) from both directional difference stacks."""
    rho = np.asarray(rho, dtype=float)
    E = np.zeros_like(rho)
    c = rho[1:-1, 1:-1]
    xr = rho[1:-1, 2:]
    xl = rho[1:-1, :-2]
    yr = rho[2:, 1:-1]
    yl = rho[:-2, 1:-1]
    d2x = xr - 2.0 * c + xl
    d2y = yr - 2.0 * c + yl
    e1 = d2x * d2x + d2y * d2y
    tx = (
        np.abs(xr - c)
        + np.abs(c - xl)
        + epsilon * (np.abs(xr) + 2.0 * np.abs(c) + np.abs(xl))
    )
    ty = (
        np.abs(yr - c)
        + np.abs(c - yl)
        + epsilon * (np.abs(yr) + 2.0 * np.abs(c) + np.abs(yl))
    )
    e2 = tx * tx + ty * ty
    nonzero = e2 > 0.0
    E[1:-1, 1:-1] = np.where(nonzero, np.sqrt(e1 / np.where(nonzero, e2, 1.0)), 0.0)
    return E


def si_smooth_2d(E: np.ndarray) -> np.ndarray:
    """9-point average with weights (1,4,1; 4,16,4; 1,4,1)/36."""
    E = np.asarray(E, dtype=float)
    out = np.zeros_like(E)
    out[1:-1, 1:-1] = (
        E[:-2, :-2]
        + E[:-2, 2:]
        + E[2:, :-2]
        + E[2:, 2:]
        + 4.0 * (E[1:-1, :-2] + E[:-2, 1:-1] + E[2:, 1:-1] + E[1:-1, 2:])
        + 16.0 * E[1:-1, 1:-1]
    ) / 36.0
    return out


def tau_new(E_bar, C: float):
    """Continuous tau map; both branches meet at 0.125 when E_bar == C."""
    Eb = np.asarray(E_bar, dtype=float)
    steep = 0.125 * (1.0 + 3.0 * np.tanh(2000.0 * (C - Eb)))
    gentle = 0.125 * (1.0 + 3.0 * np.tanh(300.0 * (C - Eb)))
    out = np.where(Eb < C, steep, gentle)
    return float(out) if out.ndim == 0 else out


def tau_old(E_bar, C: float):
    """Discrete switch: -0.25 where E_bar exceeds C, else 0.5."""
    Eb = np.asarray(E_bar, dtype=float)
    out = np.where(Eb > C, -0.25, 0.5)
    return float(out) if out.ndim == 0 else out


def compute_tau_field(rho: np.ndarray, config: IndicatorConfig) -> IndicatorField:
    """Full pipeline on a ghost-extended density array (>=2 ghost layers).

    Ghost-cell indicator values come from the boundary-extended density, so
    tau is defined one layer beyond the interior on every side.  The fixed
    strategy skips the indicator and returns a constant tau.
    """
    rho = np.asarray(rho, dtype=float)
    if config.strategy == "fixed":
        zeros = np.zeros_like(rho)
        return IndicatorField(zeros, zeros, np.full_like(rho, config.fixed_tau))
    if rho.ndim == 1:
        E = si_raw_1d(rho, config.epsilon)
        E_bar = si_smooth_1d(E)
    else:
        E = si_raw_2d(rho, config.epsilon)
        E_bar = si_smooth_2d(E)
    if config.strategy == "new":
        tau = tau_new(E_bar, config.C)
    else:
        tau = tau_old(E_bar, config.C)
    return IndicatorField(E, E_bar, tau)
