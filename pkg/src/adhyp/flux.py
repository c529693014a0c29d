"""Numerical interface fluxes: local one-sided speeds and central-upwind fluxes.

The classical central-upwind flux is the default.  A low-dissipation variant
is registered under the same contract as a plug-in seam: until an
anti-diffusion correction is supplied it evaluates identically to the
classical flux, so every driver and benchmark runs against either name.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import AdhypError
from .euler import ConservedState, GasModel

SPEED_DEGENERACY = _kernels.SPEED_DEGENERACY


@dataclass(frozen=True)
class LocalSpeeds:
    a_plus: float
    a_minus: float

    def __post_init__(self):
        if not (self.a_plus >= 0.0 >= self.a_minus):
            raise ValueError(f"speeds must satisfy a+ >= 0 >= a-, got {self}")


def _evaluate(U_left: ConservedState, U_right: ConservedState, gas: GasModel, axis: str):
    if U_left.ndim != U_right.ndim:
        raise ValueError("flux inputs must share dimensionality")
    gm1 = gas.gamma - 1.0
    if U_left.ndim == 1:
        if axis != "x":
            raise ValueError("1-D states only support the x axis")
        ul = U_left.mom_x / U_left.rho
        pl = _kernels.pressure_1d(gm1, U_left.rho, U_left.mom_x, U_left.energy)
        ur = U_right.mom_x / U_right.rho
        pr = _kernels.pressure_1d(gm1, U_right.rho, U_right.mom_x, U_right.energy)
        out = _kernels.cu_flux_1d(
            gas.gamma,
            U_left.rho, U_left.mom_x, U_left.energy, ul, pl,
            U_right.rho, U_right.mom_x, U_right.energy, ur, pr,
        )
        return np.array(out[:3]), out[3], out[4]
    pl = _kernels.pressure_2d(gm1, U_left.rho, U_left.mom_x, U_left.mom_y, U_left.energy)
    pr = _kernels.pressure_2d(gm1, U_right.rho, U_right.mom_x, U_right.mom_y, U_right.energy)
    if axis == "x":
        fn = _kernels.cu_flux_x
        nl = U_left.mom_x / U_left.rho
        nr = U_right.mom_x / U_right.rho
    else:
        fn = _kernels.cu_flux_y
        nl = U_left.mom_y / U_left.rho
        nr = U_right.mom_y / U_right.rho
    out = fn(
        gas.gamma,
        U_left.rho, U_left.mom_x, U_left.mom_y, U_left.energy, nl, pl,
        U_right.rho, U_right.mom_x, U_right.mom_y, U_right.energy, nr, pr,
    )
    return np.array(out[:4]), out[4], out[5]


def local_speeds(
    U_left: ConservedState, U_right: ConservedState, gas: GasModel, axis: str = "x"
) -> LocalSpeeds:
    """One-sided signal speeds a+ >= 0 >= a- from both states' wave fans."""
    _, ap, am = _evaluate(U_left, U_right, gas, axis)
    return LocalSpeeds(ap, am)


def cu_flux(
    U_left: ConservedState, U_right: ConservedState, gas: GasModel, axis: str = "x"
) -> np.ndarray:
    """Classical central-upwind flux; falls back to the arithmetic flux
    average when the speed fan degenerates."""
    h, _, _ = _evaluate(U_left, U_right, gas, axis)
    return h


class NumericalFlux:
    """Interface-flux contract: consistent (evaluate(U, U) == F(U))."""

    name = "base"
    uses_cu_kernel = True

    def evaluate(self, U_left, U_right, gas, axis: str = "x") -> np.ndarray:
        raise NotImplementedError


class CentralUpwindFlux(NumericalFlux):
    name = "cu"

    def evaluate(self, U_left, U_right, gas, axis: str = "x") -> np.ndarray:
        return cu_flux(U_left, U_right, gas, axis=axis)


class LowDissipationFlux(CentralUpwindFlux):
    """Seam for the low-dissipation central-upwind variant.

    Setting `anti_diffusion` to a callable
    ``(U_left, U_right, speeds, gas, axis) -> correction vector`` subtracts
    that vector from the state jump inside the diffusion term.  With the
    hook unset (the shipped default) the evaluation is the classical
    central-upwind flux, bit for bit.
    """

    name = "ldcu"
    anti_diffusion = None

    @property
    def has_anti_diffusion(self) -> bool:
        return self.anti_diffusion is not None

    def evaluate(self, U_left, U_right, gas, axis: str = "x") -> np.ndarray:
        if self.anti_diffusion is None:
            return cu_flux(U_left, U_right, gas, axis=axis)
        h, ap, am = _evaluate(U_left, U_right, gas, axis)
        d = ap - am
        if d <= SPEED_DEGENERACY * max(abs(ap), abs(am), 1.0):
            return h
        q = np.asarray(
            self.anti_diffusion(U_left, U_right, LocalSpeeds(ap, am), gas, axis),
            dtype=float,
        )
        return h - (ap * am / d) * q


FLUXES = {
    "cu": CentralUpwindFlux(),
    "ldcu": LowDissipationFlux(),
}


def get_flux(name: str) -> NumericalFlux:
    try:
        return FLUXES[name]
    except KeyError:
        raise AdhypError(
            f"unknown flux {name!r}; available: {sorted(FLUXES)}"
        ) from None
