"""Parser for the solver's plain-text field files.

The format is the plotting side of the solver's file interface:
`# key = value` header lines (one of them `columns = ...`) followed by
comma-separated data rows.  The parser is deliberately strict: any row
whose width disagrees with the columns header is rejected with its line
number, and 2-D files must be row-major with y as the outer loop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class FieldFormatError(Exception):
    """Raised for malformed field files; the message names the line."""


@dataclass
class FieldFile:
    header: dict
    columns: tuple
    data: np.ndarray
    path: str

    def col(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise FieldFormatError(f"{self.path}: no column {name!r} in {self.columns}")
        return self.data[:, self.columns.index(name)]

    @property
    def ndim(self) -> int:
        return 2 if "y" in self.columns else 1

    def header_float(self, key: str) -> float:
        try:
            return float(self.header[key])
        except KeyError:
            raise FieldFormatError(f"{self.path}: missing header key {key!r}") from None

    def header_int(self, key: str) -> int:
        return int(self.header_float(key))

    def grid_2d(self, name: str) -> np.ndarray:
        """Reshape a column to (ny, nx), validating the row-major layout."""
        nx = self.header_int("nx")
        ny = self.header_int("ny")
        if self.data.shape[0] != nx * ny:
            raise FieldFormatError(
                f"{self.path}: {self.data.shape[0]} rows, expected nx*ny = {nx * ny}"
            )
        x = self.col("x").reshape(ny, nx)
        y = self.col("y").reshape(ny, nx)
        if not (np.all(np.diff(x, axis=1) > 0) and np.all(np.diff(y, axis=0) > 0)):
            raise FieldFormatError(
                f"{self.path}: rows are not in row-major y-outer order "
                "(is the file transposed?)"
            )
        return self.col(name).reshape(ny, nx)


def load_field_file(path) -> FieldFile:
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
                    raise FieldFormatError(f"{path}:{lineno}: malformed header {line!r}")
                key, _, value = body.partition("=")
                header[key.strip()] = value.strip()
                continue
            if ncol is None:
                if "columns" not in header:
                    raise FieldFormatError(f"{path}:{lineno}: data before a columns header")
                ncol = len(header["columns"].split(","))
            parts = line.split(",")
            if len(parts) != ncol:
                raise FieldFormatError(
                    f"{path}:{lineno}: {len(parts)} fields, header declares {ncol}"
                )
            try:
                rows.append([float(p) for p in parts])
            except ValueError as exc:
                raise FieldFormatError(f"{path}:{lineno}: {exc}") from None
    if "columns" not in header:
        raise FieldFormatError(f"{path}: missing columns header")
    if not rows:
        raise FieldFormatError(f"{path}: no data rows")
    columns = tuple(c.strip() for c in header["columns"].split(","))
    return FieldFile(header, columns, np.asarray(rows), str(path))
