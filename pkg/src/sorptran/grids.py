"""Uniform cell-centered grids with ghost layers.

Cell i of a 1D grid covers (x_{i-1/2}, x_{i+1/2}) with x_{i-1/2} =
x_left + (i-1)h. Fields store the full padded arrays; the interior occupies
the slice [ghost, ghost + M) along each axis. Edge arrays carry one more
entry than cells, edge e sitting between cells e-1 and e, so the leftmost
interior edge has index ghost and the rightmost ghost + M. The 2D grid is
square (same bounds and resolution on both axes).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

GHOST = 2


@dataclass(frozen=True)
class Grid1D:
    """M uniform cells on [x_left, x_right]."""

    x_left: float
    x_right: float
    m: int
    ghost: int = GHOST

    def __post_init__(self) -> None:
        if not self.x_right > self.x_left:
            raise DomainError(f"empty interval [{self.x_left}, {self.x_right}]")
        if self.m < 4:
            raise DomainError(f"need at least four cells, got {self.m}")
        if self.ghost < 2:
            raise DomainError(f"schemes need ghost depth 2, got {self.ghost}")

    @property
    def h(self) -> float:
        return (self.x_right - self.x_left) / self.m

    @property
    def ntot(self) -> int:
        return self.m + 2 * self.ghost

    @property
    def interior(self) -> slice:
        return slice(self.ghost, self.ghost + self.m)

    def cell_centers(self, with_ghosts: bool = False) -> np.ndarray:
        i = np.arange(-self.ghost, self.m + self.ghost) if with_ghosts \
            else np.arange(self.m)
        return self.x_left + (i + 0.5) * self.h

    def edges(self, with_ghosts: bool = False) -> np.ndarray:
        i = np.arange(-self.ghost, self.m + self.ghost + 1) if with_ghosts \
            else np.arange(self.m + 1)
        return self.x_left + i * self.h


@dataclass(frozen=True)
class Grid2D:
    """M x M uniform cells on the square [x_left, x_right]^2."""

    x_left: float
    x_right: float
    m: int
    ghost: int = GHOST

    def __post_init__(self) -> None:
        if not self.x_right > self.x_left:
            raise DomainError(f"empty interval [{self.x_left}, {self.x_right}]")
        if self.m < 4:
            raise DomainError(f"need at least four cells, got {self.m}")
        if self.ghost < 2:
            raise DomainError(f"schemes need ghost depth 2, got {self.ghost}")

    @property
    def h(self) -> float:
        return (self.x_right - self.x_left) / self.m

    @property
    def ntot(self) -> int:
        return self.m + 2 * self.ghost

    @property
    def interior(self) -> tuple[slice, slice]:
        s = slice(self.ghost, self.ghost + self.m)
        return s, s

    def cell_centers(self, with_ghosts: bool = False) -> np.ndarray:
        """Coordinates along either axis (the grid is square)."""
        i = np.arange(-self.ghost, self.m + self.ghost) if with_ghosts \
            else np.arange(self.m)
        return self.x_left + (i + 0.5) * self.h

    def edges(self, with_ghosts: bool = False) -> np.ndarray:
        i = np.arange(-self.ghost, self.m + self.ghost + 1) if with_ghosts \
            else np.arange(self.m + 1)
        return self.x_left + i * self.h
