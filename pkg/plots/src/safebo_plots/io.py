"""Parsing and validation of the harness CSV schemas.

Run logs: t, s, x0..x{d-1}, f_true, g_true, violation, r, r_prime, r_X,
R, R_prime, R_X, n_surviving_x, n_G, n_M, ms.

Oracle dumps: x_index, x0..x{d-1}, s_boundary, s_opt, f_opt.
"""

from __future__ import annotations

import csv

import numpy as np

_RUN_TAIL = [
    "f_true", "g_true", "violation", "r", "r_prime", "r_X",
    "R", "R_prime", "R_X", "n_surviving_x", "n_G", "n_M", "ms",
]


class SchemaError(Exception):
    """Input file does not follow the expected column layout."""


def _x_columns(header: list[str], start: int) -> int:
    d = 0
    while start + d < len(header) and header[start + d] == f"x{d}":
        d += 1
    return d


def read_run_log(path: str) -> dict[str, np.ndarray]:
    """Load one run log into a column map; raises SchemaError on layout
    problems.  The returned map carries 'x_dim' as a plain int."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        rows = [row for row in reader]
    if header[:2] != ["t", "s"]:
        raise SchemaError(f"{path}: expected columns t,s first, got {header[:2]}")
    d = _x_columns(header, 2)
    if d == 0 or header[2 + d:] != _RUN_TAIL:
        raise SchemaError(f"{path}: unexpected run-log columns {header}")
    data = np.array([[float(v) for v in row] for row in rows], dtype=float)
    data = data.reshape(len(rows), len(header))
    out = {name: data[:, i] for i, name in enumerate(header)}
    out["x_dim"] = d
    return out


def read_oracle(path: str) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        rows = [row for row in reader]
    if header[:1] != ["x_index"]:
        raise SchemaError(f"{path}: expected x_index first, got {header[:1]}")
    d = _x_columns(header, 1)
    if d == 0 or header[1 + d:] != ["s_boundary", "s_opt", "f_opt"]:
        raise SchemaError(f"{path}: unexpected oracle columns {header}")
    if not rows:
        raise SchemaError(f"{path}: oracle file has no rows")
    data = np.array([[float(v) for v in row] for row in rows], dtype=float)
    out = {name: data[:, i] for i, name in enumerate(header)}
    out["x_dim"] = d
    return out
