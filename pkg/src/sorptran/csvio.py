"""CSV artifact formats shared by the solver, the CLI and downstream tools.

Three file kinds are produced:

* profile:     columns x,u,q - one row per interior cell of a 1D run,
* grid:        columns x,y,u,q - one row per interior cell of a 2D run,
               row-major with y as the outer loop,
* convergence: columns M,N,E,EOC,cpu_seconds,C_max_computed - one row per
               refinement rung.

Floats are written with repr, the shortest digit string that round-trips
to the same binary value, so files are reproducible bit for bit across
runs (cpu_seconds excepted, it measures wall time). Non-finite values
(the EOC of the first rung, errors of runs without a reference) are
written as empty fields and read back as nan.
"""

from __future__ import annotations

import csv
from typing import Iterable, Sequence

import numpy as np

PROFILE_HEADER = ("x", "u", "q")
GRID_HEADER = ("x", "y", "u", "q")
CONVERGENCE_HEADER = ("M", "N", "E", "EOC", "cpu_seconds", "C_max_computed")


def _fmt(value: float) -> str:
    v = float(value)
    return repr(v) if np.isfinite(v) else ""


def _parse(field: str) -> float:
    return float(field) if field else np.nan


def write_profile_csv(path, x, u, q) -> None:
    """Write a 1D profile (interior cell centers and states) to path."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(PROFILE_HEADER)
        for xi, ui, qi in zip(x, u, q):
            w.writerow((_fmt(xi), _fmt(ui), _fmt(qi)))


def read_profile_csv(path):
    """Read a profile file back into (x, u, q) arrays."""
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = tuple(next(r))
        if header != PROFILE_HEADER:
            raise ValueError(f"expected header {PROFILE_HEADER}, got {header}")
        cols = np.array([[_parse(f) for f in row] for row in r])
    return cols[:, 0], cols[:, 1], cols[:, 2]


def write_grid_csv(path, x, y, u, q) -> None:
    """Write a 2D field to path, one row per cell, y varying slowest.

    u and q are indexed [ix, iy] to match the solver's layout; the file
    orders rows by y first so that consecutive rows sweep one grid line.
    """
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(GRID_HEADER)
        for iy in range(len(y)):
            for ix in range(len(x)):
                w.writerow((_fmt(x[ix]), _fmt(y[iy]),
                            _fmt(u[ix, iy]), _fmt(q[ix, iy])))


def read_grid_csv(path):
    """Read a 2D field file back into (x, y, u, q); u and q get [ix, iy]."""
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = tuple(next(r))
        if header != GRID_HEADER:
            raise ValueError(f"expected header {GRID_HEADER}, got {header}")
        rows = np.array([[_parse(f) for f in row] for row in r])
    x = np.unique(rows[:, 0])
    y = np.unique(rows[:, 1])
    m, k = len(x), len(y)
    if m * k != len(rows):
        raise ValueError(f"{len(rows)} rows do not fill a {m} x {k} grid")
    u = rows[:, 2].reshape(k, m).T.copy()
    q = rows[:, 3].reshape(k, m).T.copy()
    return x, y, u, q


def write_convergence_csv(path, rows: Iterable[Sequence]) -> None:
    """Write refinement rungs; each row is (m, n, error, eoc, cpu, c_max)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CONVERGENCE_HEADER)
        for m, n, error, eoc, cpu, c_max in rows:
            w.writerow((str(int(m)), str(int(n)), _fmt(error), _fmt(eoc),
                        _fmt(cpu), _fmt(c_max)))


def read_convergence_csv(path) -> dict:
    """Read a convergence file into a dict of column arrays keyed by header."""
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = tuple(next(r))
        if header != CONVERGENCE_HEADER:
            raise ValueError(
                f"expected header {CONVERGENCE_HEADER}, got {header}")
        rows = list(r)
    out = {}
    for j, name in enumerate(header):
        kind = int if name in ("M", "N") else _parse
        out[name] = np.array([kind(row[j]) for row in rows])
    return out
