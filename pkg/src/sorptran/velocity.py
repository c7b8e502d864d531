"""Velocity fields and their positive/negative edge splittings.

A 1D velocity is any callable of x; a 2D velocity returns the pair
(v, w) on meshgrid-style inputs. The split helpers evaluate the field at
cell edges over the full padded index range and separate the signs, which
is all the upwind schemes need: v = v_plus + v_minus exactly, with
v_plus >= 0 >= v_minus and at most one of them nonzero per edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import Grid1D, Grid2D


@dataclass(frozen=True)
class ConstantVelocity:
    value: float = 1.0

    def __call__(self, x):
        return np.full_like(np.asarray(x, dtype=np.float64), self.value)


@dataclass(frozen=True)
class CosineVelocity:
    """v(x) = amplitude * cos(x); changes sign at odd multiples of pi/2."""

    amplitude: float = 1.0

    def __call__(self, x):
        return self.amplitude * np.cos(np.asarray(x, dtype=np.float64))


@dataclass(frozen=True)
class TabulatedVelocity:
    """Piecewise linear interpolant of user supplied (x, v) samples.

    Outside the sample range the end values are held constant, matching
    np.interp. The samples must be strictly increasing in x.
    """

    x: tuple[float, ...]
    v: tuple[float, ...]

    def __post_init__(self):
        if len(self.x) != len(self.v) or len(self.x) < 2:
            raise ValueError("need matching x and v samples, at least two")
        if np.any(np.diff(self.x) <= 0.0):
            raise ValueError("x samples must be strictly increasing")

    def __call__(self, x):
        return np.interp(np.asarray(x, dtype=np.float64), self.x, self.v)


@dataclass(frozen=True)
class RotationVelocity:
    """Rigid rotation (-rate*y, rate*x) about the origin; divergence free."""

    rate: float = 2.0 * np.pi

    def __call__(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        return -self.rate * y, self.rate * x


@dataclass(frozen=True)
class ConstantVelocity2D:
    vx: float = 1.0
    vy: float = 0.0

    def __call__(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        return np.full_like(x, self.vx), np.full_like(x, self.vy)


def edge_split_1d(grid: Grid1D, velocity):
    """Signed parts (v_plus, v_minus) of the edge velocities, ghosts included."""
    v = np.asarray(velocity(grid.edges(with_ghosts=True)), dtype=np.float64)
    return np.maximum(v, 0.0), np.minimum(v, 0.0)


def _meshed(velocity, coords_a, coords_b):
    a, b = np.meshgrid(coords_a, coords_b, indexing="ij")
    return velocity(a, b)


def edge_split_2d(grid: Grid2D, velocity):
    """Edge-normal velocity splittings on both axes, ghosts included.

    Returns (vpx, vmx, wpy, wmy): the x components live on x edges at cell
    centers in y (shape (ntot+1, ntot)) and the y components on y edges
    (shape (ntot, ntot+1)).
    """
    edges = grid.edges(with_ghosts=True)
    centers = grid.cell_centers(with_ghosts=True)
    vx, _ = _meshed(velocity, edges, centers)
    _, vy = _meshed(velocity, centers, edges)
    vx = np.ascontiguousarray(vx, dtype=np.float64)
    vy = np.ascontiguousarray(vy, dtype=np.float64)
    return (np.maximum(vx, 0.0), np.minimum(vx, 0.0),
            np.maximum(vy, 0.0), np.minimum(vy, 0.0))
