"""Finite-volume solver for 1-D/2-D Euler gas dynamics with adaptive slope limiting."""

__version__ = "0.1.0"

from .errors import (
    AdhypError,
    CatalogError,
    DecompositionError,
    FieldFileError,
    InvalidStateError,
    MeshCompatibilityError,
    SolverAbort,
)
from .euler import (
    ConservedState,
    EigenSystem,
    GasModel,
    PrimitiveState,
    cons_to_prim,
    conserved_from_primitives,
    eigensystem_x,
    eigensystem_y,
    interface_average,
    physical_flux_x,
    physical_flux_y,
    prim_to_cons,
    primitives_from_conserved,
)
from .flux import FLUXES, LocalSpeeds, NumericalFlux, cu_flux, get_flux, local_speeds
from .indicator import (
    IndicatorConfig,
    IndicatorField,
    compute_tau_field,
    si_raw_1d,
    si_raw_2d,
    si_smooth_1d,
    si_smooth_2d,
    tau_new,
    tau_old,
)
from .integrate import (
    BoundarySpec,
    Field,
    Grid,
    RunResult,
    SchemeConfig,
    SideBC,
    StepStats,
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
from .limiter import LimiterParams, phi_sbm, slope_limited
from .problems import (
    ProblemSpec,
    catalog,
    get_problem,
    make_initial_field,
    smooth_convergence_problem,
)
from .reconstruct import (
    InterfaceValues,
    reconstruct_interface_1d,
    reconstruct_interface_2d_x,
    reconstruct_interface_2d_y,
)
