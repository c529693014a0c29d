"""Plain-text field files and flat key=value metadata.

Field files carry `# key = value` header lines (problem, time, mesh,
scheme parameters, code version) followed by comma-separated rows.
1-D columns: x,rho,u,p,E,tau,Ebar.  2-D columns: x,y,rho,u,v,p,E,tau,Ebar
in row-major order with y as the outer loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FieldFileError
from .euler import primitives_from_conserved
from .indicator import IndicatorField
from .integrate import Field

COLUMNS_1D = ("x", "rho", "u", "p", "E", "tau", "Ebar")
COLUMNS_2D = ("x", "y", "rho", "u", "v", "p", "E", "tau", "Ebar")

_LOG_FLOOR = 1e-300  # keeps ln(Ebar) finite on exactly-flat data


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


@dataclass
class FieldData:
    header: dict
    columns: tuple
    data: np.ndarray
    path: str = ""

    def col(self, name: str) -> np.ndarray:
        try:
            return self.data[:, self.columns.index(name)]
        except ValueError:
            raise FieldFileError(f"{self.path}: no column {name!r}") from None

    @property
    def ndim(self) -> int:
        return 2 if "y" in self.columns else 1

    def header_float(self, key: str) -> float:
        return float(self.header[key])

    def header_int(self, key: str) -> int:
        return int(self.header[key])


def write_field_file(path, field: Field, t: float, gamma: float,
                     indicator: IndicatorField, header: dict) -> None:
    grid = field.grid
    inner = field.interior()
    meta = dict(header)
    meta.update({
        "t": t,
        "nx": grid.nx,
        "x_min": grid.x_min,
        "x_max": grid.x_max,
        "gamma": gamma,
    })
    g = grid.ghost
    if grid.ndim == 1:
        meta["columns"] = ",".join(COLUMNS_1D)
        rho, vel, p = primitives_from_conserved(inner, gamma)
        cols = [
            grid.x_centers(), rho, vel, p, inner[:, 2],
            grid.interior(indicator.tau), grid.interior(indicator.E_bar),
        ]
    else:
        meta.update({"ny": grid.ny, "y_min": grid.y_min, "y_max": grid.y_max})
        meta["columns"] = ",".join(COLUMNS_2D)
        rho, ux, uy, p = primitives_from_conserved(inner, gamma)
        xs = np.tile(grid.x_centers(), grid.ny)
        ys = np.repeat(grid.y_centers(), grid.nx)
        cols = [
            xs, ys, rho.ravel(), ux.ravel(), uy.ravel(), p.ravel(),
            inner[..., 3].ravel(),
            grid.interior(indicator.tau).ravel(),
            grid.interior(indicator.E_bar).ravel(),
        ]
    _write_rows(path, meta, cols)


def write_indicator_file(path, field: Field, indicator: IndicatorField, header: dict) -> None:
    """Per-cell indicator dump: raw E, averaged Ebar, and ln(Ebar)."""
    grid = field.grid
    e = grid.interior(indicator.E)
    eb = grid.interior(indicator.E_bar)
    ln_eb = np.log(np.maximum(eb, _LOG_FLOOR))
    meta = dict(header)
    meta["nx"] = grid.nx
    meta["x_min"] = grid.x_min
    meta["x_max"] = grid.x_max
    if grid.ndim == 1:
        meta["columns"] = "x,E,Ebar,ln_Ebar"
        cols = [grid.x_centers(), e, eb, ln_eb]
    else:
        meta.update({"ny": grid.ny, "y_min": grid.y_min, "y_max": grid.y_max})
        meta["columns"] = "x,y,E,Ebar,ln_Ebar"
        xs = np.tile(grid.x_centers(), grid.ny)
        ys = np.repeat(grid.y_centers(), grid.nx)
        cols = [xs, ys, e.ravel(), eb.ravel(), ln_eb.ravel()]
    _write_rows(path, meta, cols)


def _write_rows(path, meta: dict, cols) -> None:
    arr = np.column_stack(cols)
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in meta.items():
            fh.write(f"# {key} = {_fmt(value)}\n")
        for row in arr:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def read_field_file(path) -> FieldData:
    header: dict = {}
    rows = []
    ncol = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" not in body:
                    raise FieldFileError(f"{path}:{lineno}: malformed header line {line!r}")
                key, _, value = body.partition("=")
                header[key.strip()] = value.strip()
                continue
            parts = line.split(",")
            if ncol is None:
                if "columns" not in header:
                    raise FieldFileError(f"{path}:{lineno}: data before a columns header")
                ncol = len(header["columns"].split(","))
            if len(parts) != ncol:
                raise FieldFileError(
                    f"{path}:{lineno}: expected {ncol} columns, found {len(parts)}"
                )
            try:
                rows.append([float(p) for p in parts])
            except ValueError as exc:
                raise FieldFileError(f"{path}:{lineno}: {exc}") from None
    if "columns" not in header:
        raise FieldFileError(f"{path}: missing columns header")
    columns = tuple(c.strip() for c in header["columns"].split(","))
    if not rows:
        raise FieldFileError(f"{path}: no data rows")
    return FieldData(header, columns, np.asarray(rows), path=str(path))


def write_metadata(path, mapping: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in mapping.items():
            fh.write(f"{key} = {_fmt(value)}\n")


def read_metadata(path) -> dict:
    out = {}
    with open(Path(path), "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise FieldFileError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out
