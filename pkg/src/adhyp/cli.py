"""Command-line front end: runs, reference solutions, error norms, convergence.

Subcommands: run, reference, error, convergence, list-problems.
Exit codes: 0 ok, 1 usage, 2 solver abort, 3 I/O.
Config precedence: CLI flags > config file > catalog defaults.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import AdhypError, CatalogError, FieldFileError, MeshCompatibilityError
from .indicator import compute_tau_field
from .integrate import Field, RunResult, SchemeConfig, run_to
from .io import (
    read_field_file,
    read_metadata,
    write_field_file,
    write_indicator_file,
    write_metadata,
)
from .problems import ProblemSpec, catalog, get_problem, make_initial_field

log = logging.getLogger("adhyp")


@dataclass
class RunConfig:
    problem: str = ""
    scheme: str = "new"  # new | old | fixed:<tau>
    nx: int | None = None
    ny: int | None = None
    C: float | None = None  # None -> catalog default for the chosen scheme
    epsilon: float = 0.2
    theta: float = 2.0
    cfl: float = 0.4
    flux: str = "cu"
    tau_refresh: str = "step"
    init_quadrature: str = "midpoint"
    first_order: bool = False
    t_end: float | None = None
    snapshots: tuple = ()
    out_dir: str = "out"
    dump_indicator: bool = False
    log_every: int = 0


def parse_scheme(scheme: str):
    """Split a scheme string into (strategy, fixed_tau)."""
    if scheme in ("new", "old"):
        return scheme, 0.5
    if scheme.startswith("fixed:"):
        return "fixed", float(scheme.split(":", 1)[1])
    if scheme == "fixed":
        return "fixed", 0.5
    raise ValueError(f"scheme must be new, old, or fixed:<tau>; got {scheme!r}")


def effective_C(rc: RunConfig, spec: ProblemSpec) -> float:
    if rc.C is not None:
        return rc.C
    strategy, _ = parse_scheme(rc.scheme)
    return spec.C_old if strategy == "old" else spec.C_new


def scheme_config(rc: RunConfig, spec: ProblemSpec) -> SchemeConfig:
    strategy, fixed_tau = parse_scheme(rc.scheme)
    return SchemeConfig(
        strategy=strategy,
        fixed_tau=fixed_tau,
        C=effective_C(rc, spec),
        epsilon=rc.epsilon,
        theta=rc.theta,
        cfl=rc.cfl,
        gamma=spec.gamma,
        flux=rc.flux,
        tau_refresh=rc.tau_refresh,
        first_order=rc.first_order,
    )


def _field_header(rc: RunConfig, spec: ProblemSpec, cfg: SchemeConfig) -> dict:
    return {
        "problem": spec.id,
        "scheme": rc.scheme,
        "C": cfg.C,
        "epsilon": cfg.epsilon,
        "theta": cfg.theta,
        "cfl": cfg.cfl,
        "flux": cfg.flux,
        "version": __version__,
    }


def do_run(rc: RunConfig):
    """Execute one configured run, writing snapshots, metadata, and dumps.

    Returns (RunResult, out_dir).
    """
    spec = get_problem(rc.problem)
    cfg = scheme_config(rc, spec)
    field = make_initial_field(spec, rc.nx, rc.ny, quadrature=rc.init_quadrature)
    t_end = rc.t_end if rc.t_end is not None else spec.t_end
    snaps = tuple(spec.snapshot_times) + tuple(rc.snapshots)
    snaps = tuple(s for s in snaps if s <= t_end)

    os.makedirs(rc.out_dir, exist_ok=True)
    tic = time.perf_counter()
    result = run_to(
        field, t_end, cfg, spec.bc, source=spec.source,
        snapshot_times=snaps, log_every=rc.log_every,
    )
    elapsed = time.perf_counter() - tic

    header = _field_header(rc, spec, cfg)
    icfg = cfg.indicator_config()
    for t_snap in sorted(result.snapshots):
        snap = Field(result.snapshots[t_snap], field.grid)
        ind = compute_tau_field(snap.u[..., 0], icfg)
        path = os.path.join(rc.out_dir, f"solution_t{t_snap:.6g}.csv")
        write_field_file(path, snap, t_snap, cfg.gamma, ind, header)
    if result.aborted:
        ind = compute_tau_field(result.field.u[..., 0], icfg)
        path = os.path.join(rc.out_dir, "solution_aborted.csv")
        write_field_file(path, result.field, result.t, cfg.gamma, ind, header)
    if rc.dump_indicator:
        ind = compute_tau_field(result.field.u[..., 0], icfg)
        ipath = os.path.join(rc.out_dir, f"indicator_t{result.t:.6g}.csv")
        write_indicator_file(ipath, result.field, ind, {**header, "t": result.t})

    meta = {
        "problem": spec.id,
        "scheme": rc.scheme,
        "nx": field.grid.nx,
        "C": cfg.C,
        "epsilon": cfg.epsilon,
        "theta": cfg.theta,
        "cfl": cfg.cfl,
        "gamma": cfg.gamma,
        "flux": cfg.flux,
        "tau_refresh": cfg.tau_refresh,
        "init_quadrature": rc.init_quadrature,
        "first_order": rc.first_order,
        "t_end": t_end,
        "out_dir": rc.out_dir,
        "dump_indicator": rc.dump_indicator,
        "version": __version__,
        "status": "aborted" if result.aborted else "completed",
        "steps": len(result.stats),
        "total_fallbacks": result.total_fallbacks,
        "total_slope_limits": result.total_slope_limits,
        "elapsed_seconds": elapsed,
    }
    if field.grid.ndim == 2:
        meta["ny"] = field.grid.ny
    if result.aborted:
        meta["abort_reason"] = result.abort_reason
    if rc.snapshots:
        meta["snapshots"] = ",".join(f"{s:.17g}" for s in rc.snapshots)
    write_metadata(os.path.join(rc.out_dir, "meta.txt"), meta)
    return result, rc.out_dir


# --- error norms between field files ------------------------------------------


def _restrict_1d(values: np.ndarray, factor: int) -> np.ndarray:
    return values.reshape(-1, factor).mean(axis=1)


def _restrict_2d(values: np.ndarray, ny_f, nx_f, fy, fx) -> np.ndarray:
    return values.reshape(ny_f // fy, fy, nx_f // fx, fx).mean(axis=(1, 3))


def compute_error(path_a, path_b, norm: str = "l1", window=None) -> float:
    """Discrete norm of the density difference; the finer mesh is restricted
    to the coarser by cell-average aggregation."""
    a = read_field_file(path_a)
    b = read_field_file(path_b)
    if a.ndim != b.ndim:
        raise MeshCompatibilityError("cannot compare 1-D and 2-D fields")
    for key in ("x_min", "x_max") + (("y_min", "y_max") if a.ndim == 2 else ()):
        if not math.isclose(a.header_float(key), b.header_float(key), rel_tol=1e-12, abs_tol=1e-12):
            raise MeshCompatibilityError(f"domain mismatch on {key}")
    norm = norm.lower()
    if norm not in ("l1", "l2", "linf"):
        raise ValueError(f"norm must be L1, L2, or Linf; got {norm!r}")

    if a.ndim == 1:
        na, nb = a.header_int("nx"), b.header_int("nx")
        if na == nb:
            coarse, fine, factor = a, b, 1
        else:
            coarse, fine = (a, b) if na < nb else (b, a)
            nc, nf = coarse.header_int("nx"), fine.header_int("nx")
            if nf % nc:
                raise MeshCompatibilityError(f"mesh sizes {nc} and {nf} do not nest")
            factor = nf // nc
        rho_c = coarse.col("rho")
        rho_f = _restrict_1d(fine.col("rho"), factor)
        x = coarse.col("x")
        diff = rho_c - rho_f
        if window is not None:
            lo, hi = window
            sel = (x >= lo) & (x <= hi)
            diff = diff[sel]
        dx = (coarse.header_float("x_max") - coarse.header_float("x_min")) / coarse.header_int("nx")
        if norm == "l1":
            return float(np.sum(np.abs(diff)) * dx)
        if norm == "l2":
            return float(np.sqrt(np.sum(diff * diff) * dx))
        return float(np.max(np.abs(diff)))

    nxa, nya = a.header_int("nx"), a.header_int("ny")
    nxb, nyb = b.header_int("nx"), b.header_int("ny")
    coarse, fine = (a, b) if nxa <= nxb else (b, a)
    nxc, nyc = coarse.header_int("nx"), coarse.header_int("ny")
    nxf, nyf = fine.header_int("nx"), fine.header_int("ny")
    if nxf % nxc or nyf % nyc:
        raise MeshCompatibilityError("2-D meshes do not nest")
    rho_c = coarse.col("rho").reshape(nyc, nxc)
    rho_f = _restrict_2d(fine.col("rho").reshape(nyf, nxf), nyf, nxf, nyf // nyc, nxf // nxc)
    diff = rho_c - rho_f
    dx = (coarse.header_float("x_max") - coarse.header_float("x_min")) / nxc
    dy = (coarse.header_float("y_max") - coarse.header_float("y_min")) / nyc
    if window is not None:
        lo, hi = window
        x = coarse.col("x").reshape(nyc, nxc)
        sel = (x >= lo) & (x <= hi)
        diff = diff[sel]
    if norm == "l1":
        return float(np.sum(np.abs(diff)) * dx * dy)
    if norm == "l2":
        return float(np.sqrt(np.sum(diff * diff) * dx * dy))
    return float(np.max(np.abs(diff)))


# --- convergence study -----------------------------------------------------------


def convergence_table(problem: str, scheme: str, meshes, C=None, *,
                      epsilon=0.2, theta=2.0, cfl=0.4, flux="cu",
                      first_order=False, t_end=None, quadrature="midpoint"):
    """Run a mesh sequence and report L1 density errors against the finest.

    Returns rows of (nx, error, order); order is None on the first row.
    """
    meshes = sorted(int(m) for m in meshes)
    if len(meshes) < 3:
        raise ValueError("a convergence study needs at least 3 meshes")
    if len(set(meshes)) != len(meshes):
        raise ValueError("meshes must be distinct")
    for coarse_m, fine_m in zip(meshes, meshes[1:]):
        if fine_m % coarse_m:
            raise ValueError(f"mesh {fine_m} must be divisible by {coarse_m}")

    spec = get_problem(problem)
    if spec.dim != 1:
        raise ValueError("convergence studies are implemented for 1-D problems")
    rc = RunConfig(problem=problem, scheme=scheme, C=C, epsilon=epsilon, theta=theta,
                   cfl=cfl, flux=flux, first_order=first_order, t_end=t_end)
    cfg = scheme_config(rc, spec)
    t_stop = t_end if t_end is not None else spec.t_end

    solutions = {}
    for m in meshes:
        field = make_initial_field(spec, m, quadrature=quadrature)
        result = run_to(field, t_stop, cfg, spec.bc, source=spec.source)
        if result.aborted:
            raise AdhypError(f"convergence run at nx={m} aborted: {result.abort_reason}")
        solutions[m] = result.field.interior()[:, 0].copy()

    # successive-pair differences: for a p-th order scheme the ratio of
    # consecutive pair errors is (refinement ratio)^p, without the bias a
    # fixed in-sequence reference introduces
    dx_of = lambda m: (spec.x_max - spec.x_min) / m
    errors = []
    for coarse_m, fine_m in zip(meshes, meshes[1:]):
        coarse = solutions[coarse_m]
        fine = _restrict_1d(solutions[fine_m], fine_m // coarse_m)
        errors.append(float(np.sum(np.abs(coarse - fine)) * dx_of(coarse_m)))
    rows = []
    for i, m in enumerate(meshes[:-1]):
        if i == 0:
            rows.append((m, errors[i], None))
        else:
            ratio = meshes[i] / meshes[i - 1]
            order = math.log(errors[i - 1] / errors[i]) / math.log(ratio)
            rows.append((m, errors[i], order))
    return rows


# --- argument parsing --------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_scheme_options(p):
    p.add_argument("--scheme", default=None, help="new | old | fixed:<tau>")
    p.add_argument("--C", type=float, default=None, help="adaption constant")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--cfl", type=float, default=None)
    p.add_argument("--flux", default=None, choices=["cu", "ldcu"])
    p.add_argument("--tau-refresh", default=None, choices=["step", "stage"])
    p.add_argument("--first-order", action="store_true", default=None)
    p.add_argument("--init-quadrature", default=None, choices=["midpoint", "gauss4"])


def _build_parser() -> _Parser:
    parser = _Parser(prog="adhyp", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_run = sub.add_parser("run", help="run one configured problem")
    p_run.add_argument("--problem", default=None, help="problem id (or via --config)")
    p_run.add_argument("--nx", type=int, default=None)
    p_run.add_argument("--ny", type=int, default=None)
    p_run.add_argument("--t-end", type=float, default=None)
    p_run.add_argument("--snapshots", default=None, help="comma-separated times")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument("--dump-indicator", action="store_true", default=None)
    p_run.add_argument("--config", default=None, help="key = value file of defaults")
    p_run.add_argument("--log-every", type=int, default=None)
    _add_scheme_options(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_ref = sub.add_parser("reference", help="fine-mesh fixed-limiter reference run")
    p_ref.add_argument("--problem", required=True)
    p_ref.add_argument("--nx", type=int, default=None)
    p_ref.add_argument("--ny", type=int, default=None)
    p_ref.add_argument("--refine", type=int, default=10,
                       help="refinement factor when the problem has no stock reference mesh")
    p_ref.add_argument("--out", default=None)
    p_ref.add_argument("--cfl", type=float, default=None)
    p_ref.add_argument("--flux", default=None, choices=["cu", "ldcu"])
    p_ref.add_argument("--log-every", type=int, default=None)
    p_ref.set_defaults(func=_cmd_reference)

    p_err = sub.add_parser("error", help="norm of the density difference of two files")
    p_err.add_argument("file_a")
    p_err.add_argument("file_b")
    p_err.add_argument("--norm", default="L1", help="L1 | L2 | Linf")
    p_err.add_argument("--window", nargs=2, type=float, default=None, metavar=("LO", "HI"))
    p_err.set_defaults(func=_cmd_error)

    p_conv = sub.add_parser("convergence", help="observed-order table over a mesh sequence")
    p_conv.add_argument("--problem", required=True)
    p_conv.add_argument("--meshes", required=True, help="comma-separated cell counts")
    p_conv.add_argument("--t-end", type=float, default=None)
    _add_scheme_options(p_conv)
    p_conv.set_defaults(func=_cmd_convergence)

    p_list = sub.add_parser("list-problems", help="catalog summary")
    p_list.set_defaults(func=_cmd_list)
    return parser


_CONFIG_TYPES = {
    "problem": str, "scheme": str, "nx": int, "ny": int, "C": float,
    "epsilon": float, "theta": float, "cfl": float, "flux": str,
    "tau_refresh": str, "init_quadrature": str, "first_order": lambda s: s.lower() == "true",
    "t_end": float, "out_dir": str, "dump_indicator": lambda s: s.lower() == "true",
    "log_every": int,
}


def _resolve_run_config(args) -> RunConfig:
    rc = RunConfig()
    if getattr(args, "config", None):
        file_cfg = read_metadata(args.config)
        for key, raw in file_cfg.items():
            if key in _CONFIG_TYPES and hasattr(rc, key):
                setattr(rc, key, _CONFIG_TYPES[key](raw))
    overrides = {
        "problem": args.problem, "scheme": args.scheme, "nx": args.nx, "ny": args.ny,
        "C": args.C, "epsilon": args.epsilon, "theta": args.theta, "cfl": args.cfl,
        "flux": args.flux, "tau_refresh": args.tau_refresh,
        "init_quadrature": args.init_quadrature, "first_order": args.first_order,
        "t_end": args.t_end, "out_dir": args.out, "dump_indicator": args.dump_indicator,
        "log_every": args.log_every,
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(rc, key, value)
    if args.snapshots is not None:
        rc.snapshots = tuple(float(s) for s in args.snapshots.split(","))
    if not rc.problem:
        raise ValueError("a problem id is required")
    return rc


def _cmd_run(args) -> int:
    rc = _resolve_run_config(args)
    result, out_dir = do_run(rc)
    if result.aborted:
        print(f"ABORTED: {result.abort_reason} (partial outputs in {out_dir})", file=sys.stderr)
        return 2
    print(f"completed {rc.problem} in {len(result.stats)} steps -> {out_dir}")
    return 0


def _cmd_reference(args) -> int:
    spec = get_problem(args.problem)
    if args.nx is not None:
        nx = args.nx
    elif spec.reference_nx is not None:
        nx = spec.reference_nx
    else:
        nx = spec.nx_default * args.refine
    ny = args.ny
    if spec.dim == 2 and ny is None:
        ny = spec.ny_default * (nx // spec.nx_default) if args.nx else spec.ny_default * args.refine
    # temporal error at the reference resolution is negligible; CFL 0.5
    # shortens these long runs (benchmark runs keep the stock 0.4)
    rc = RunConfig(
        problem=args.problem, scheme="fixed:0.5", nx=nx, ny=ny,
        cfl=args.cfl if args.cfl is not None else 0.5,
        flux=args.flux if args.flux is not None else "cu",
        out_dir=args.out or f"reference_{args.problem}",
        log_every=args.log_every or 0,
    )
    result, out_dir = do_run(rc)
    if result.aborted:
        print(f"ABORTED: {result.abort_reason}", file=sys.stderr)
        return 2
    print(f"reference for {args.problem} at nx={nx} -> {out_dir}")
    return 0


def _cmd_error(args) -> int:
    window = tuple(args.window) if args.window else None
    value = compute_error(args.file_a, args.file_b, norm=args.norm, window=window)
    print(f"{value:.17g}")
    return 0


def _cmd_convergence(args) -> int:
    meshes = [int(m) for m in args.meshes.split(",")]
    rows = convergence_table(
        args.problem, args.scheme or "fixed:0.5", meshes, C=args.C,
        epsilon=args.epsilon if args.epsilon is not None else 0.2,
        theta=args.theta if args.theta is not None else 2.0,
        cfl=args.cfl if args.cfl is not None else 0.4,
        flux=args.flux or "cu",
        first_order=bool(args.first_order),
        t_end=args.t_end,
        quadrature=args.init_quadrature or "midpoint",
    )
    print(f"{'nx':>8} {'L1_error':>16} {'order':>8}")
    for nx, err, order in rows:
        order_s = f"{order:8.3f}" if order is not None else "       -"
        print(f"{nx:>8} {err:16.8e} {order_s}")
    return 0


def _cmd_list(args) -> int:
    print(f"{'id':<10} {'dim':>3} {'mesh':>12} {'t_end':>8} {'gamma':>7} "
          f"{'C_old':>7} {'C_new':>7}  description")
    for spec in catalog().values():
        mesh = f"{spec.nx_default}" if spec.dim == 1 else f"{spec.nx_default}x{spec.ny_default}"
        print(f"{spec.id:<10} {spec.dim:>3} {mesh:>12} {spec.t_end:>8g} {spec.gamma:>7.4g} "
              f"{spec.C_old:>7g} {spec.C_new:>7g}  {spec.description}")
    return 0


def _setup_threads():
    raw = os.environ.get("ADHYP_THREADS")
    if not raw:
        return
    import numba

    try:
        requested = int(raw)
    except ValueError:
        raise ValueError(f"ADHYP_THREADS must be an integer, got {raw!r}") from None
    numba.set_num_threads(max(1, min(requested, numba.config.NUMBA_NUM_THREADS)))


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        _setup_threads()
        return args.func(args)
    except (CatalogError, MeshCompatibilityError, ValueError) as exc:
        print(f"adhyp: error: {exc}", file=sys.stderr)
        return 1
    except (FieldFileError, OSError) as exc:
        print(f"adhyp: i/o error: {exc}", file=sys.stderr)
        return 3
    except AdhypError as exc:
        print(f"adhyp: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
