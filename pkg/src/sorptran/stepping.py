"""Shared time-stepping infrastructure.

Scheme-independent pieces live here: the scheme configuration, boundary
conditions and ghost filling, problem descriptions bundling grid, isotherm,
velocity and boundaries, and the diagnostic records returned by single steps
and whole runs. The schemes themselves are in schemes_1d and schemes_2d.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .errors import DomainError
from .grids import Grid1D, Grid2D
from .isotherm import DEFAULT_NEWTON, IsothermSpec, NewtonConfig

SCHEMES = ("explicit1", "explicit2", "implicit1", "compact2", "hires_weno")


@dataclass(frozen=True)
class SchemeConfig:
    """Discretization choices shared by all solvers.

    scheme selects the update; omega is the blend weight of the compact
    second order scheme (the WENO scheme computes its own weights and
    ignores it). sweep_tol and max_sweeps control the Gauss-Seidel
    iteration of the implicit schemes. corrector_rounds is the number of
    predictor/corrector passes of the WENO scheme; one round recomputes
    weights once from the first order predictor.
    """

    scheme: str = "implicit1"
    omega: float = 0.5
    newton: NewtonConfig = DEFAULT_NEWTON
    sweep_tol: float = 1e-10
    max_sweeps: int = 100
    weno_eps: float = 1e-6
    corrector_rounds: int = 1

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise DomainError(
                f"unknown scheme {self.scheme!r}, expected one of {SCHEMES}")
        if not 0.0 <= self.omega <= 1.0:
            raise DomainError(f"omega must lie in [0, 1], got {self.omega}")
        if not self.sweep_tol > 0.0:
            raise DomainError(f"sweep_tol must be positive, got {self.sweep_tol}")
        if self.max_sweeps < 2:
            raise DomainError(f"max_sweeps must be at least 2, got {self.max_sweeps}")
        if not self.weno_eps > 0.0:
            raise DomainError(f"weno_eps must be positive, got {self.weno_eps}")
        if self.corrector_rounds < 1:
            raise DomainError(
                f"corrector_rounds must be at least 1, got {self.corrector_rounds}")


@dataclass
class LimiterState:
    """Weights and limiters of one limited 1D step, kept for diagnostics.

    Arrays are padded like the fields. predictor is the converged first
    order solution the weights were computed from (None for the compact
    scheme, which uses fixed weights).
    """

    omega_plus: np.ndarray
    omega_minus: np.ndarray
    l_plus: np.ndarray
    l_minus: np.ndarray
    predictor: Optional[np.ndarray] = None


@dataclass
class LimiterState2D:
    """Per-axis weights and limiters of one limited 2D step."""

    omega_x_plus: np.ndarray
    omega_x_minus: np.ndarray
    l_x_plus: np.ndarray
    l_x_minus: np.ndarray
    omega_y_plus: np.ndarray
    omega_y_minus: np.ndarray
    l_y_plus: np.ndarray
    l_y_minus: np.ndarray
    predictor: Optional[np.ndarray] = None


@dataclass
class StepDiagnostics:
    """Cost and flux record of a single step.

    Boundary fluxes are the time-integrated numerical fluxes tau*v*U at the
    domain edges (summed along each side in 2D), so the discrete mass
    balance of the step reads h*sum(dq) = flux_left - flux_right in 1D and
    h^2*sum(dq) = h*(flux_left - flux_right + flux_bottom - flux_top) in 2D.

    The 1D steppers also attach edge_flux, the spatial flux v*U on every
    interior edge (not scaled by tau), which exposes the reconstructed
    interface values wherever the edge velocity is nonzero.
    """

    sweeps_used: int
    newton_iters_total: int
    flux_left: float
    flux_right: float
    wall_time: float
    flux_bottom: float = 0.0
    flux_top: float = 0.0
    limiter: Optional[Union[LimiterState, LimiterState2D]] = None
    edge_flux: Optional[np.ndarray] = None


# ---------------------------------------------------------------------------
# boundary conditions


@dataclass(frozen=True)
class DirichletBC:
    """Fixed boundary value, replicated into both ghost cells."""

    value: float = 0.0

    def fill_left(self, u: np.ndarray, grid: Grid1D, t: float) -> None:
        u[: grid.ghost] = self.value

    def fill_right(self, u: np.ndarray, grid: Grid1D, t: float) -> None:
        u[grid.ghost + grid.m:] = self.value

    def fill_2d(self, u: np.ndarray, grid: Grid2D, t: float) -> None:
        g, m = grid.ghost, grid.m
        u[:g, :] = self.value
        u[g + m:, :] = self.value
        u[:, :g] = self.value
        u[:, g + m:] = self.value


@dataclass(frozen=True)
class OutflowBC:
    """Zero-gradient extrapolation of the nearest interior cell."""

    def fill_left(self, u: np.ndarray, grid: Grid1D, t: float) -> None:
        u[: grid.ghost] = u[grid.ghost]

    def fill_right(self, u: np.ndarray, grid: Grid1D, t: float) -> None:
        u[grid.ghost + grid.m:] = u[grid.ghost + grid.m - 1]

    def fill_2d(self, u: np.ndarray, grid: Grid2D, t: float) -> None:
        g, m = grid.ghost, grid.m
        u[:g, :] = u[g, :]
        u[g + m:, :] = u[g + m - 1, :]
        u[:, :g] = u[:, g][:, None]
        u[:, g + m:] = u[:, g + m - 1][:, None]


@dataclass(frozen=True)
class ExactBC:
    """Ghost cells evaluated from a reference solution.

    provider(x, t) returns concentrations at the requested cell centers; the
    step routines call it at both the old and the new time level, so the
    implicit stencils see boundary data of the level they belong to.
    """

    provider: Callable[..., np.ndarray]

    def fill_left(self, u: np.ndarray, grid: Grid1D, t: float) -> None:
        xc = grid.cell_centers(with_ghosts=True)[: grid.ghost]
        u[: grid.ghost] = self.provider(xc, t)

    def fill_right(self, u: np.ndarray, grid: Grid1D, t: float) -> None:
        xc = grid.cell_centers(with_ghosts=True)[grid.ghost + grid.m:]
        u[grid.ghost + grid.m:] = self.provider(xc, t)

    def fill_2d(self, u: np.ndarray, grid: Grid2D, t: float) -> None:
        g, m = grid.ghost, grid.m
        c = grid.cell_centers(with_ghosts=True)
        for sl in (np.s_[:g], np.s_[g + m:]):
            xg, yg = np.meshgrid(c[sl], c, indexing="ij")
            u[sl, :] = self.provider(xg, yg, t)
            xg, yg = np.meshgrid(c, c[sl], indexing="ij")
            u[:, sl] = self.provider(xg, yg, t)


def fill_ghosts_1d(u: np.ndarray, grid: Grid1D, bc_left, bc_right, t: float) -> None:
    bc_left.fill_left(u, grid, t)
    bc_right.fill_right(u, grid, t)


# ---------------------------------------------------------------------------
# problems and run records


@dataclass(frozen=True)
class Problem1D:
    """A 1D transport problem: geometry, physics and boundary data."""

    grid: Grid1D
    isotherm: IsothermSpec
    velocity: Callable[[np.ndarray], np.ndarray]
    bc_left: Union[DirichletBC, OutflowBC, ExactBC]
    bc_right: Union[DirichletBC, OutflowBC, ExactBC]
    t0: float = 0.0


@dataclass(frozen=True)
class Problem2D:
    """A 2D transport problem; one boundary condition serves all four sides."""

    grid: Grid2D
    isotherm: IsothermSpec
    velocity: Callable[..., tuple]
    bc: Union[DirichletBC, OutflowBC, ExactBC]
    t0: float = 0.0


@dataclass
class RunResult:
    """Final state and aggregate diagnostics of a completed run.

    u and q are the padded arrays at t_final; mass bookkeeping uses the
    conserved variable q over the interior. conservation_defect_max is the
    largest single-step violation of the discrete mass balance, and
    boundary_flux_net the time-integrated net inflow, so
    mass_final - mass_initial - boundary_flux_net measures cumulative drift.
    """

    u: np.ndarray
    q: np.ndarray
    grid: Union[Grid1D, Grid2D]
    t_final: float
    steps_taken: int
    wall_time: float
    sweeps_total: int
    sweeps_max: int
    newton_iters_total: int
    mass_initial: float
    mass_final: float
    boundary_flux_net: float
    conservation_defect_max: float
    u_min_seen: float
    u_max_seen: float

    @property
    def interior_u(self) -> np.ndarray:
        return self.u[self.grid.interior]

    @property
    def interior_q(self) -> np.ndarray:
        return self.q[self.grid.interior]
