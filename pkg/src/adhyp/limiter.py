"""Two-parameter slope-limiter family and the limited-slope formula."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels

SLOPE_NOISE_FLOOR = _kernels.SLOPE_NOISE_FLOOR


@dataclass(frozen=True)
class LimiterParams:
    """(theta, tau) pair: theta in [1, 2], tau in [-0.25, 0.5]."""

    theta: float = 2.0
    tau: float = 0.5

    def __post_init__(self):
        if not 1.0 <= self.theta <= 2.0:
            raise ValueError(f"theta must lie in [1, 2], got {self.theta}")
        if not -0.25 <= self.tau <= 0.5:
            raise ValueError(f"tau must lie in [-0.25, 0.5], got {self.tau}")


def phi_sbm(r, params: LimiterParams):
    """Limiter value at slope ratio r; accepts a scalar or an array."""
    arr = np.asarray(r, dtype=float)
    if arr.ndim == 0:
        return float(_kernels.phi_sbm_scalar(float(arr), params.theta, params.tau))
    out = np.empty_like(arr)
    flat_in = arr.ravel()
    flat_out = out.ravel()
    for i in range(flat_in.size):
        flat_out[i] = _kernels.phi_sbm_scalar(flat_in[i], params.theta, params.tau)
    return out


def slope_limited(gamma_prev, gamma_mid, gamma_next, dx, params: LimiterParams):
    """Limited slope from three consecutive values, componentwise on vectors.

    Flat stencils (backward difference below the relative noise floor)
    return a zero slope instead of evaluating a degenerate ratio.
    """
    if dx <= 0.0:
        raise ValueError(f"cell width must be positive, got {dx}")
    gp = np.asarray(gamma_prev, dtype=float)
    gm = np.asarray(gamma_mid, dtype=float)
    gn = np.asarray(gamma_next, dtype=float)
    if gp.ndim == 0:
        return float(
            _kernels.slope_scalar(float(gp), float(gm), float(gn), dx, params.theta, params.tau)
        )
    out = np.empty_like(gm)
    fp, fm, fn, fo = gp.ravel(), gm.ravel(), gn.ravel(), out.ravel()
    for i in range(fm.size):
        fo[i] = _kernels.slope_scalar(fp[i], fm[i], fn[i], dx, params.theta, params.tau)
    return out
