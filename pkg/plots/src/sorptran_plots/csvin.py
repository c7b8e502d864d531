"""Readers for the solver's CSV artifact schemas.

Only the documented column layouts are accepted. Empty fields denote
non-finite values and come back as nan, mirroring the writer convention.
"""

from __future__ import annotations

import csv
import math
import pathlib
from typing import Union

import numpy as np

PROFILE_HEADER = ("x", "u", "q")
GRID_HEADER = ("x", "y", "u", "q")
CONVERGENCE_HEADER = ("M", "N", "E", "EOC", "cpu_seconds", "C_max_computed")

PathLike = Union[str, pathlib.Path]


class PlotInputError(Exception):
    """An artifact file is missing, malformed or off-schema."""


def _rows(path: PathLike, header: tuple[str, ...]) -> list[list[float]]:
    path = pathlib.Path(path)
    try:
        fh = open(path, newline="")
    except OSError as err:
        raise PlotInputError(f"{path}: cannot read ({err.strerror})") from err
    with fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise PlotInputError(f"{path}: empty file") from None
        if tuple(first) != header:
            raise PlotInputError(
                f"{path}: expected header {','.join(header)}, "
                f"got {','.join(first)}")
        rows = []
        for k, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise PlotInputError(
                    f"{path}: line {k} has {len(row)} fields, "
                    f"expected {len(header)}")
            try:
                rows.append([math.nan if f == "" else float(f) for f in row])
            except ValueError:
                raise PlotInputError(
                    f"{path}: line {k} is not numeric") from None
    if not rows:
        raise PlotInputError(f"{path}: no data rows")
    return rows


def read_profile(path: PathLike) -> dict[str, np.ndarray]:
    """Load a 1D profile, columns x, u, q."""
    data = np.asarray(_rows(path, PROFILE_HEADER))
    return {name: data[:, k] for k, name in enumerate(PROFILE_HEADER)}


def read_convergence(path: PathLike) -> dict[str, np.ndarray]:
    """Load a convergence table, one row per ladder rung."""
    data = np.asarray(_rows(path, CONVERGENCE_HEADER))
    return {name: data[:, k] for k, name in enumerate(CONVERGENCE_HEADER)}


def read_grid(path: PathLike) -> dict[str, np.ndarray]:
    """Load a square 2D field written with y varying slowest.

    Returns 1D edge coordinate vectors "x" and "y" of length m and the
    (m, m) arrays "u" and "q" indexed [y, x].
    """
    data = np.asarray(_rows(path, GRID_HEADER))
    m = math.isqrt(data.shape[0])
    if m * m != data.shape[0]:
        raise PlotInputError(
            f"{path}: {data.shape[0]} rows do not form a square grid")
    x = data[:m, 0]
    y = data[::m, 1]
    if not (np.array_equal(np.tile(x, m), data[:, 0])
            and np.array_equal(np.repeat(y, m), data[:, 1])):
        raise PlotInputError(f"{path}: rows are not in y-slowest order")
    return {"x": x, "y": y,
            "u": data[:, 2].reshape(m, m), "q": data[:, 3].reshape(m, m)}
