"""Piecewise-linear interface reconstruction in local characteristic variables.

Each interface builds its own eigensystem from the primitive-averaged state
of its two neighbors, projects the four-cell stencil onto characteristic
variables, limits slopes with the per-cell tau, and maps the one-sided
values back to conserved variables.  A cell whose linear profile leaves
the admissible set (positive density and pressure at both endpoints) has
its slope rescaled to the largest admissible fraction; if even that fails,
a graded emergency chain redoes the slopes with tau = 0.5 and finally
falls back to the flat cell average.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .euler import ConservedState, GasModel, primitives_from_conserved


@dataclass(frozen=True)
class InterfaceValues:
    left: ConservedState
    right: ConservedState
    fallbacks: int = 0
    limited: int = 0


def _as_c_f64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64)


def reconstruct_interface_1d(
    u: np.ndarray,
    tau: np.ndarray,
    theta: float,
    gas: GasModel,
    j: int,
    dx: float = 1.0,
    first_order: bool = False,
) -> InterfaceValues:
    """One-sided values at the interface between cells j and j+1.

    `u` is a ghost-extended (m, 3) conserved array and `tau` the matching
    per-cell limiter parameter; cells j-1 .. j+2 must exist.
    """
    u = _as_c_f64(u)
    if not 1 <= j <= u.shape[0] - 3:
        raise IndexError(f"interface {j} needs cells {j - 1}..{j + 2} in an array of {u.shape[0]}")
    _, vel, pres = primitives_from_conserved(u, gas.gamma)
    fb_mask = np.zeros(u.shape[0], dtype=np.uint8)
    lim_mask = np.zeros(u.shape[0], dtype=np.uint8)
    rl, ml, el, _, _, rr, mr, er, _, _, fb = _kernels.iface_states_1d(
        u, vel, pres, _as_c_f64(tau), fb_mask, lim_mask, j, float(dx),
        gas.gamma, float(theta), first_order
    )
    return InterfaceValues(
        ConservedState(rl, ml, el), ConservedState(rr, mr, er), int(fb),
        limited=int(lim_mask.sum()),
    )


def reconstruct_interface_2d_x(
    u: np.ndarray,
    tau: np.ndarray,
    theta: float,
    gas: GasModel,
    j: int,
    k: int,
    dx: float = 1.0,
    first_order: bool = False,
) -> InterfaceValues:
    """x-interface between cells (k, j) and (k, j+1) of a (my, mx, 4) array."""
    u = _as_c_f64(u)
    if not 1 <= j <= u.shape[1] - 3:
        raise IndexError(f"x-interface {j} out of range for nx={u.shape[1]}")
    _, velx, vely, pres = primitives_from_conserved(u, gas.gamma)
    fb_mask = np.zeros(u.shape[:2], dtype=np.uint8)
    lim_mask = np.zeros(u.shape[:2], dtype=np.uint8)
    rl, mxl, myl, el, _, _, rr, mxr, myr, er, _, _, fb = _kernels.iface_states_x(
        u, velx, vely, pres, _as_c_f64(tau), fb_mask, lim_mask, k, j, float(dx),
        gas.gamma, float(theta), first_order
    )
    return InterfaceValues(
        ConservedState(rl, mxl, el, mom_y=myl),
        ConservedState(rr, mxr, er, mom_y=myr),
        int(fb),
        limited=int(lim_mask.sum()),
    )


def reconstruct_interface_2d_y(
    u: np.ndarray,
    tau: np.ndarray,
    theta: float,
    gas: GasModel,
    j: int,
    k: int,
    dy: float = 1.0,
    first_order: bool = False,
) -> InterfaceValues:
    """y-interface between cells (k, j) and (k+1, j)."""
    u = _as_c_f64(u)
    if not 1 <= k <= u.shape[0] - 3:
        raise IndexError(f"y-interface {k} out of range for ny={u.shape[0]}")
    _, velx, vely, pres = primitives_from_conserved(u, gas.gamma)
    fb_mask = np.zeros(u.shape[:2], dtype=np.uint8)
    lim_mask = np.zeros(u.shape[:2], dtype=np.uint8)
    rl, mxl, myl, el, _, _, rr, mxr, myr, er, _, _, fb = _kernels.iface_states_y(
        u, velx, vely, pres, _as_c_f64(tau), fb_mask, lim_mask, k, j, float(dy),
        gas.gamma, float(theta), first_order
    )
    return InterfaceValues(
        ConservedState(rl, mxl, el, mom_y=myl),
        ConservedState(rr, mxr, er, mom_y=myr),
        int(fb),
        limited=int(lim_mask.sum()),
    )
