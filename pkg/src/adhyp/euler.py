"""Ideal-gas state algebra, physical fluxes, and the characteristic eigensystem.

States carry an optional transverse momentum/velocity so the 1-D and 2-D
solvers share one layout; component ordering in arrays is
(rho, mom_x[, mom_y], energy).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DecompositionError, InvalidStateError


@dataclass(frozen=True)
class GasModel:
    """Ideal gas with a constant specific heat ratio."""

    gamma: float

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"specific heat ratio must exceed 1, got {self.gamma}")


@dataclass(frozen=True)
class ConservedState:
    rho: float
    mom_x: float
    energy: float
    mom_y: float | None = None

    @property
    def ndim(self) -> int:
        return 1 if self.mom_y is None else 2

    def as_array(self) -> np.ndarray:
        if self.mom_y is None:
            return np.array([self.rho, self.mom_x, self.energy])
        return np.array([self.rho, self.mom_x, self.mom_y, self.energy])

    @staticmethod
    def from_array(arr) -> "ConservedState":
        arr = np.asarray(arr, dtype=float)
        if arr.shape == (3,):
            return ConservedState(arr[0], arr[1], arr[2])
        if arr.shape == (4,):
            return ConservedState(arr[0], arr[1], arr[3], mom_y=arr[2])
        raise ValueError(f"expected a 3- or 4-component state, got shape {arr.shape}")


@dataclass(frozen=True)
class PrimitiveState:
    rho: float
    u: float
    p: float
    v: float | None = None

    @property
    def ndim(self) -> int:
        return 1 if self.v is None else 2


@dataclass(frozen=True)
class EigenSystem:
    """Right eigenvectors R, closed-form inverse, and ascending eigenvalues."""

    R: np.ndarray
    Rinv: np.ndarray
    eigenvalues: np.ndarray


def cons_to_prim(U: ConservedState, gas: GasModel, cell=None) -> PrimitiveState:
    """Convert a conserved state to primitives via the ideal-gas law."""
    if not U.rho > 0.0:
        raise InvalidStateError(f"non-positive density {U.rho!r}", cell=cell, state=U)
    u = U.mom_x / U.rho
    if U.mom_y is None:
        ke = 0.5 * U.rho * u * u
        v = None
    else:
        v = U.mom_y / U.rho
        ke = 0.5 * U.rho * (u * u + v * v)
    p = (gas.gamma - 1.0) * (U.energy - ke)
    if not p > 0.0:
        raise InvalidStateError(f"non-positive pressure {p!r}", cell=cell, state=U)
    return PrimitiveState(U.rho, u, p, v=v)


def prim_to_cons(W: PrimitiveState, gas: GasModel) -> ConservedState:
    if not W.rho > 0.0 or not W.p > 0.0:
        raise InvalidStateError(f"non-positive inputs rho={W.rho!r} p={W.p!r}", state=W)
    if W.v is None:
        ke = 0.5 * W.rho * W.u * W.u
        mom_y = None
    else:
        ke = 0.5 * W.rho * (W.u * W.u + W.v * W.v)
        mom_y = W.rho * W.v
    energy = W.p / (gas.gamma - 1.0) + ke
    return ConservedState(W.rho, W.rho * W.u, energy, mom_y=mom_y)


def sound_speed(W: PrimitiveState, gas: GasModel) -> float:
    return float(np.sqrt(gas.gamma * W.p / W.rho))


def physical_flux_x(U: ConservedState, gas: GasModel) -> np.ndarray:
    """Flux of the conservation system in the x direction."""
    W = cons_to_prim(U, gas)
    if U.mom_y is None:
        return np.array([U.mom_x, U.mom_x * W.u + W.p, W.u * (U.energy + W.p)])
    return np.array(
        [U.mom_x, U.mom_x * W.u + W.p, U.mom_y * W.u, W.u * (U.energy + W.p)]
    )


def physical_flux_y(U: ConservedState, gas: GasModel) -> np.ndarray:
    if U.mom_y is None:
        raise ValueError("y-flux requires a 2-D state")
    W = cons_to_prim(U, gas)
    return np.array(
        [U.mom_y, U.mom_x * W.v, U.mom_y * W.v + W.p, W.v * (U.energy + W.p)]
    )


def interface_average(W_left: PrimitiveState, W_right: PrimitiveState) -> PrimitiveState:
    """Arithmetic mean of the primitive variables."""
    if W_left.ndim != W_right.ndim:
        raise ValueError("cannot average states of different dimensionality")
    v = None if W_left.v is None else 0.5 * (W_left.v + W_right.v)
    return PrimitiveState(
        0.5 * (W_left.rho + W_right.rho),
        0.5 * (W_left.u + W_right.u),
        0.5 * (W_left.p + W_right.p),
        v=v,
    )


def _eig_quantities(W: PrimitiveState, gas: GasModel):
    if not W.rho > 0.0 or not W.p > 0.0:
        raise DecompositionError(
            f"cannot decompose at rho={W.rho!r}, p={W.p!r}"
        )
    gm1 = gas.gamma - 1.0
    c = np.sqrt(gas.gamma * W.p / W.rho)
    if W.v is None:
        kin = W.u * W.u
    else:
        kin = W.u * W.u + W.v * W.v
    eh = W.p / gm1 + 0.5 * W.rho * kin
    hh = (eh + W.p) / W.rho
    q1 = gm1 / (c * c)
    q2 = 0.5 * kin * q1
    return c, hh, q1, q2, 0.5 * kin


def eigensystem_x(W_hat: PrimitiveState, gas: GasModel) -> EigenSystem:
    """Eigensystem of the x-flux Jacobian at the given (averaged) state.

    Parameters
    ----------
    W_hat : PrimitiveState
        Interface state, typically from `interface_average`.
    gas : GasModel

    Returns
    -------
    EigenSystem
        R with right eigenvectors as columns, Rinv in closed form, and
        eigenvalues sorted ascending (u-c, u[, u], u+c).
    """
    c, hh, q1, q2, ek = _eig_quantities(W_hat, gas)
    u = W_hat.u
    ic = 1.0 / c
    if W_hat.v is None:
        R = np.array(
            [
                [1.0, 1.0, 1.0],
                [u - c, u, u + c],
                [hh - u * c, ek, hh + u * c],
            ]
        )
        Rinv = np.array(
            [
                [0.5 * (q2 + u * ic), 0.5 * (-q1 * u - ic), 0.5 * q1],
                [1.0 - q2, q1 * u, -q1],
                [0.5 * (q2 - u * ic), 0.5 * (-q1 * u + ic), 0.5 * q1],
            ]
        )
        lam = np.array([u - c, u, u + c])
    else:
        v = W_hat.v
        R = np.array(
            [
                [1.0, 1.0, 0.0, 1.0],
                [u - c, u, 0.0, u + c],
                [v, v, 1.0, v],
                [hh - u * c, ek, v, hh + u * c],
            ]
        )
        Rinv = np.array(
            [
                [0.5 * (q2 + u * ic), 0.5 * (-q1 * u - ic), 0.5 * (-q1 * v), 0.5 * q1],
                [1.0 - q2, q1 * u, q1 * v, -q1],
                [-v, 0.0, 1.0, 0.0],
                [0.5 * (q2 - u * ic), 0.5 * (-q1 * u + ic), 0.5 * (-q1 * v), 0.5 * q1],
            ]
        )
        lam = np.array([u - c, u, u, u + c])
    return EigenSystem(R, Rinv, lam)


def eigensystem_y(W_hat: PrimitiveState, gas: GasModel) -> EigenSystem:
    """Eigensystem of the y-flux Jacobian; the roles of u and v swap."""
    if W_hat.v is None:
        raise DecompositionError("y-direction eigensystem requires a 2-D state")
    c, hh, q1, q2, ek = _eig_quantities(W_hat, gas)
    u = W_hat.u
    v = W_hat.v
    ic = 1.0 / c
    R = np.array(
        [
            [1.0, 1.0, 0.0, 1.0],
            [u, u, 1.0, u],
            [v - c, v, 0.0, v + c],
            [hh - v * c, ek, u, hh + v * c],
        ]
    )
    Rinv = np.array(
        [
            [0.5 * (q2 + v * ic), 0.5 * (-q1 * u), 0.5 * (-q1 * v - ic), 0.5 * q1],
            [1.0 - q2, q1 * u, q1 * v, -q1],
            [-u, 1.0, 0.0, 0.0],
            [0.5 * (q2 - v * ic), 0.5 * (-q1 * u), 0.5 * (-q1 * v + ic), 0.5 * q1],
        ]
    )
    lam = np.array([v - c, v, v, v + c])
    return EigenSystem(R, Rinv, lam)


# --- array helpers for whole fields -----------------------------------------


def primitives_from_conserved(u: np.ndarray, gamma: float):
    """Vectorized (rho, u[, v], p) from a (..., 3) or (..., 4) conserved array."""
    rho = u[..., 0]
    if u.shape[-1] == 3:
        vel = u[..., 1] / rho
        p = (gamma - 1.0) * (u[..., 2] - 0.5 * (u[..., 1] * u[..., 1]) / rho)
        return rho, vel, p
    ux = u[..., 1] / rho
    uy = u[..., 2] / rho
    p = (gamma - 1.0) * (
        u[..., 3] - 0.5 * (u[..., 1] * u[..., 1] + u[..., 2] * u[..., 2]) / rho
    )
    return rho, ux, uy, p


def conserved_from_primitives(rho, u, p, gamma, v=None):
    """Vectorized inverse of `primitives_from_conserved`; stacks along the last axis."""
    rho = np.asarray(rho, dtype=float)
    u = np.asarray(u, dtype=float)
    p = np.asarray(p, dtype=float)
    if v is None:
        energy = p / (gamma - 1.0) + 0.5 * rho * u * u
        return np.stack([rho, rho * u, energy], axis=-1)
    v = np.asarray(v, dtype=float)
    energy = p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v)
    return np.stack([rho, rho * u, rho * v, energy], axis=-1)
