"""Benchmark catalog: domains, initial data, boundaries, and tuned constants.

Seven gas-dynamics benchmarks (ex1..ex7) plus a smooth periodic advection
case (smooth1d) for order verification.  Initial cell averages default to
midpoint sampling of the pointwise data; a 4-point Gauss rule is available
for the 1-D sine regions as a sensitivity check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CatalogError
from .euler import conserved_from_primitives
from .integrate import BoundarySpec, Field, Grid, dirichlet, free, periodic, wall


@dataclass(frozen=True)
class ProblemSpec:
    id: str
    dim: int
    x_min: float
    x_max: float
    nx_default: int
    gamma: float
    t_end: float
    bc: BoundarySpec
    initial: Callable  # (x) -> (rho, u, p)  or  (x, y) -> (rho, u, v, p)
    y_min: float = 0.0
    y_max: float = 0.0
    ny_default: int = 0
    source: str = "none"
    C_old: float = 0.01
    C_new: float = 0.01
    snapshot_times: tuple = ()
    reference_nx: int | None = None
    description: str = ""


def _ex1_init(x):
    # sweeping shock over a standing sinusoidal density field
    if x < -4.0:
        return (27.0 / 7.0, 4.0 * math.sqrt(35.0) / 9.0, 31.0 / 3.0)
    return (1.0 + 0.2 * math.sin(5.0 * x), 0.0, 1.0)


def _ex2_init(x):
    if x < -4.5:
        return (1.51695, 0.523346, 1.805)
    return (1.0 + 0.1 * math.sin(20.0 * x), 0.0, 1.0)


def _ex3_init(x):
    if x < 0.1:
        return (1.0, 0.0, 1000.0)
    if x <= 0.9:
        return (1.0, 0.0, 0.01)
    return (1.0, 0.0, 100.0)


def _ex4_init(x, y):
    if x > 1.0 and y > 1.0:
        return (1.5, 0.0, 0.0, 1.5)
    if x < 1.0 and y > 1.0:
        return (0.5323, 1.206, 0.0, 0.3)
    if x < 1.0 and y < 1.0:
        return (0.138, 1.206, 1.206, 0.029)
    return (0.5323, 0.0, 1.206, 0.3)


def _ex5_init(x, y):
    if x > 0.5 and y > 0.5:
        return (1.0, 0.75, -0.5, 1.0)
    if x < 0.5 and y > 0.5:
        return (2.0, 0.75, 0.5, 1.0)
    if x < 0.5 and y < 0.5:
        return (1.0, -0.75, 0.5, 1.0)
    return (3.0, -0.75, -0.5, 1.0)


def _ex6_init(x, y):
    if x > 0.5 and y > 0.5:
        return (0.5313, 0.0, 0.0, 0.4)
    if x < 0.5 and y > 0.5:
        return (1.0, 0.7276, 0.0, 1.0)
    if x < 0.5 and y < 0.5:
        return (0.8, 0.0, 0.0, 1.0)
    return (1.0, 0.0, 0.7276, 1.0)


_GAMMA_RT = 5.0 / 3.0


def _ex7_init(x, y):
    # heavy fluid below, light above; gravity acts in +y
    if y < 0.5:
        rho, p = 2.0, 2.0 * y + 1.0
    else:
        rho, p = 1.0, y + 1.5
    c = math.sqrt(_GAMMA_RT * p / rho)
    return (rho, 0.0, -0.025 * c * math.cos(8.0 * math.pi * x), p)


def _smooth1d_init(x):
    return (1.0 + 0.5 * math.sin(x), 1.0, 1.0)


def smooth_convergence_problem() -> ProblemSpec:
    """Periodic density wave advected at unit speed; exact profile transport."""
    return ProblemSpec(
        id="smooth1d",
        dim=1,
        x_min=0.0,
        x_max=2.0 * math.pi,
        nx_default=128,
        gamma=1.4,
        t_end=0.1,
        bc=BoundarySpec(periodic(), periodic()),
        initial=_smooth1d_init,
        C_old=1.0,
        C_new=1.0,
        description="smooth periodic advection (order verification)",
    )


def catalog() -> dict[str, ProblemSpec]:
    specs = [
        ProblemSpec(
            id="ex1", dim=1, x_min=-5.0, x_max=15.0, nx_default=800, gamma=1.4,
            t_end=5.0, bc=BoundarySpec(free(), free()), initial=_ex1_init,
            C_old=0.01, C_new=0.005, reference_nx=8000,
            description="shock/density-wave interaction",
        ),
        ProblemSpec(
            id="ex2", dim=1, x_min=-5.0, x_max=5.0, nx_default=800, gamma=1.4,
            t_end=5.0, bc=BoundarySpec(free(), free()), initial=_ex2_init,
            C_old=0.01, C_new=0.002, reference_nx=16000,
            description="shock/entropy-wave interaction (Titarev-Toro)",
        ),
        ProblemSpec(
            id="ex3", dim=1, x_min=0.0, x_max=1.0, nx_default=400, gamma=1.4,
            t_end=0.038, bc=BoundarySpec(wall(), wall()), initial=_ex3_init,
            C_old=0.01, C_new=0.005, reference_nx=8000,
            description="interacting blast waves",
        ),
        ProblemSpec(
            id="ex4", dim=2, x_min=0.0, x_max=1.2, y_min=0.0, y_max=1.2,
            nx_default=1000, ny_default=1000, gamma=1.4, t_end=1.0,
            bc=BoundarySpec(free(), free(), free(), free()), initial=_ex4_init,
            C_old=0.08, C_new=0.06,
            description="2-D Riemann problem, configuration 3",
        ),
        ProblemSpec(
            id="ex5", dim=2, x_min=0.0, x_max=1.0, y_min=0.0, y_max=1.0,
            nx_default=600, ny_default=600, gamma=1.4, t_end=1.0,
            bc=BoundarySpec(free(), free(), free(), free()), initial=_ex5_init,
            C_old=0.1, C_new=0.075,
            description="2-D Riemann problem, configuration 6",
        ),
        ProblemSpec(
            id="ex6", dim=2, x_min=0.0, x_max=0.6, y_min=0.0, y_max=0.6,
            nx_default=600, ny_default=600, gamma=1.4, t_end=0.5,
            bc=BoundarySpec(free(), free(), free(), free()), initial=_ex6_init,
            C_old=0.03, C_new=0.025,
            description="2-D Riemann problem, configuration 12",
        ),
        ProblemSpec(
            id="ex7", dim=2, x_min=0.0, x_max=0.25, y_min=0.0, y_max=1.0,
            nx_default=256, ny_default=1024, gamma=_GAMMA_RT, t_end=2.95,
            bc=BoundarySpec(
                wall(), wall(),
                dirichlet(2.0, 0.0, 0.0, 1.0), dirichlet(1.0, 0.0, 0.0, 2.5),
            ),
            initial=_ex7_init, source="rt_gravity",
            C_old=0.08, C_new=0.06, snapshot_times=(1.95,),
            description="Rayleigh-Taylor instability with gravity source",
        ),
        smooth_convergence_problem(),
    ]
    return {s.id: s for s in specs}


_CATALOG = None


def get_problem(problem_id: str) -> ProblemSpec:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = catalog()
    try:
        return _CATALOG[problem_id]
    except KeyError:
        raise CatalogError(
            f"unknown problem {problem_id!r}; known: {sorted(_CATALOG)}"
        ) from None


# 4-point Gauss-Legendre nodes/weights on [-1, 1]
_GAUSS4_NODES = (
    -0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526,
)
_GAUSS4_WEIGHTS = (
    0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538,
)


def make_grid(spec: ProblemSpec, nx: int | None = None, ny: int | None = None) -> Grid:
    nx = nx or spec.nx_default
    if spec.dim == 1:
        return Grid(nx, spec.x_min, spec.x_max)
    ny = ny or spec.ny_default
    return Grid(nx, spec.x_min, spec.x_max, ny=ny, y_min=spec.y_min, y_max=spec.y_max)


def make_initial_field(
    spec: ProblemSpec,
    nx: int | None = None,
    ny: int | None = None,
    quadrature: str = "midpoint",
) -> Field:
    """Sample the initial data into cell averages on a ghost-padded grid.

    `quadrature` is "midpoint" (default) or "gauss4"; the Gauss rule applies
    to 1-D problems only and averages the conserved samples.
    """
    if quadrature not in ("midpoint", "gauss4"):
        raise ValueError(f"unknown quadrature {quadrature!r}")
    grid = make_grid(spec, nx, ny)
    u = np.zeros(grid.array_shape())
    g = grid.ghost
    if spec.dim == 1:
        xs = grid.x_centers()
        if quadrature == "midpoint":
            vals = [spec.initial(x) for x in xs]
            rho, vel, p = (np.array([v[i] for v in vals]) for i in range(3))
            u[g : g + grid.nx] = conserved_from_primitives(rho, vel, p, spec.gamma)
        else:
            half = 0.5 * grid.dx
            for j, xc in enumerate(xs):
                acc = np.zeros(3)
                for node, wgt in zip(_GAUSS4_NODES, _GAUSS4_WEIGHTS):
                    rho, vel, p = spec.initial(xc + node * half)
                    acc += 0.5 * wgt * conserved_from_primitives(rho, vel, p, spec.gamma)
                u[g + j] = acc
    else:
        if quadrature == "gauss4":
            raise ValueError("gauss4 initialization is available for 1-D problems only")
        xs = grid.x_centers()
        ys = grid.y_centers()
        for k, yc in enumerate(ys):
            row = [spec.initial(x, yc) for x in xs]
            rho, ux, uy, p = (np.array([v[i] for v in row]) for i in range(4))
            u[g + k, g : g + grid.nx] = conserved_from_primitives(
                rho, ux, p, spec.gamma, v=uy
            )
    return Field(u, grid)
