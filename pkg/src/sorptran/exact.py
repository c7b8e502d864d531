"""Reference solutions: the exact step-problem profile and a fine-grid oracle.

The step problem (u = 1 on (0, 1), zero elsewhere, v = 1) transforms into a
scalar conservation law for q = F(u) whose flux is the inverse isotherm. For
p < 1 the flux is convex, so the left edge of the step opens into a
rarefaction fan while the right edge sharpens into a shock; for p > 1 the
roles mirror. Both waves are available in closed form from characteristics
and the Rankine-Hugoniot condition, valid until the fan overtakes the shock.
Everything else (variable velocity, 2D) has no closed form and is served by
a refined high-resolution run restricted back to the coarse grid.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import DomainError
from .grids import Grid1D, Grid2D
from .isotherm import IsothermSpec
from .schemes_1d import run_1d
from .schemes_2d import run_2d
from .stepping import Problem1D, SchemeConfig

# below this distance from p = 1 the fan exponent 1/(p-1) is treated as the
# limiting pure-translation case
P_LINEAR_TOL = 1e-6

# nodes and weights of 3-point Gauss-Legendre quadrature on [-1, 1]
_GAUSS3_X = np.array([-np.sqrt(3.0 / 5.0), 0.0, np.sqrt(3.0 / 5.0)])
_GAUSS3_W = np.array([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])


@dataclass(frozen=True)
class StepRiemannSolution:
    """Entropy solution of the step problem for one isotherm.

    The wave layout depends on the sign of p - 1:

    * p < 1: rarefaction fan anchored at x = 0, plateau u = 1, shock from
      x = 1 moving at speed 1/F(1),
    * p > 1: shock from x = 0 at speed 1/F(1), plateau, fan anchored at
      x = 1 whose tail moves at the unretarded speed 1,
    * |p - 1| <= P_LINEAR_TOL: the step translates rigidly at speed 1/F(1).

    Valid for 0 <= t < t_interact, the time at which the fan reaches the
    shock; later queries raise DomainError.
    """

    isotherm: IsothermSpec

    @property
    def p(self) -> float:
        return self.isotherm.p

    @property
    def a(self) -> float:
        return self.isotherm.a

    @property
    def is_linear(self) -> bool:
        return abs(self.p - 1.0) <= P_LINEAR_TOL

    @property
    def shock_speed(self) -> float:
        """Rankine-Hugoniot speed of the unit jump, 1/F(1) = 1/(1 + a)."""
        return 1.0 / (1.0 + self.a)

    @property
    def fan_edge_speed(self) -> float:
        """Characteristic speed of the u = 1 state, 1/F'(1)."""
        return 1.0 / (1.0 + self.a * self.p)

    @property
    def t_interact(self) -> float:
        """Time at which the fan edge catches up with the shock."""
        if self.is_linear:
            return np.inf
        a, p = self.a, self.p
        return (1.0 + a * p) * (1.0 + a) / (a * abs(1.0 - p))

    def _require_valid(self, t: float) -> None:
        if t < 0.0:
            raise DomainError(f"negative time {t!r}")
        if t >= self.t_interact:
            raise DomainError(
                f"t = {t!r} is past the wave interaction time "
                f"{self.t_interact!r}; the two-wave profile no longer holds")

    def breakpoints(self, t: float) -> tuple[float, ...]:
        """Positions where the profile at time t is non-smooth, ascending."""
        self._require_valid(t)
        if self.is_linear:
            return (self.shock_speed * t, 1.0 + self.shock_speed * t)
        if self.p < 1.0:
            return (0.0, self.fan_edge_speed * t, 1.0 + self.shock_speed * t)
        return (self.shock_speed * t, 1.0 + self.fan_edge_speed * t, 1.0 + t)

    def _fan(self, xi: np.ndarray, t: float) -> np.ndarray:
        """Self-similar fan profile over distance xi > 0 from its anchor."""
        a, p = self.a, self.p
        with np.errstate(divide="ignore", over="ignore"):
            s = (t / xi - 1.0) / (a * p)
            return np.where(xi > 0.0, s, np.inf) ** (1.0 / (p - 1.0))

    def u(self, x, t: float) -> np.ndarray:
        """Solution values at positions x and time t (0 <= t < t_interact)."""
        self._require_valid(t)
        x = np.asarray(x, dtype=np.float64)
        if t == 0.0 or self.is_linear:
            left, right = self.shock_speed * t, 1.0 + self.shock_speed * t
            return np.where((x > left) & (x <= right), 1.0, 0.0)
        out = np.zeros(x.shape)
        if self.p < 1.0:
            head = self.fan_edge_speed * t
            shock = 1.0 + self.shock_speed * t
            fan = (x > 0.0) & (x < head)
            out[(x >= head) & (x <= shock)] = 1.0
            out[fan] = self._fan(x[fan], t)
        else:
            shock = self.shock_speed * t
            edge = 1.0 + self.fan_edge_speed * t
            fan = (x > edge) & (x < 1.0 + t)
            out[(x > shock) & (x <= edge)] = 1.0
            out[fan] = self._fan(x[fan] - 1.0, t)
        return out

    def q(self, x, t: float) -> np.ndarray:
        """Conserved values F(u) at positions x and time t."""
        return np.asarray(self.isotherm.F(self.u(x, t)))

    def cell_averages(self, grid: Grid1D, t: float) -> np.ndarray:
        """Exact cell averages of u on the interior cells of grid.

        Each cell is split at the wave positions inside it and integrated
        piece by piece with 3-point Gauss quadrature, so the kinks and the
        jump do not degrade the quadrature order.
        """
        return self._averages(lambda x: self.u(x, t), grid, t)

    def q_cell_averages(self, grid: Grid1D, t: float) -> np.ndarray:
        """Exact cell averages of q = F(u), quadrature as in cell_averages."""
        return self._averages(lambda x: self.q(x, t), grid, t)

    def _averages(self, f: Callable, grid: Grid1D, t: float) -> np.ndarray:
        self._require_valid(t)
        edges = grid.edges()
        breaks = np.array(self.breakpoints(t))
        if not self.is_linear and t > 0.0:
            # u behaves like distance**(1/(1-p)) or distance**(1/(p-1)) at
            # the zero end of the fan, so its higher derivatives (and those
            # of F(u)) blow up there; geometrically graded subdivisions
            # restore quadrature accuracy (each piece sees a self-similar
            # profile)
            if self.p < 1.0:
                anchor, other = 0.0, self.fan_edge_speed * t
            else:
                anchor, other = 1.0 + t, 1.0 + self.fan_edge_speed * t
            dist = (other - anchor) * 2.0 ** -np.arange(1, 51)
            breaks = np.concatenate((breaks, anchor + dist))
        breaks = breaks[(breaks > edges[0]) & (breaks < edges[-1])]
        cuts = np.unique(np.concatenate((edges, breaks)))
        mids = 0.5 * (cuts[:-1] + cuts[1:])
        half = 0.5 * (cuts[1:] - cuts[:-1])
        # integral over each piece by mapping the Gauss nodes into it
        nodes = mids[:, None] + half[:, None] * _GAUSS3_X[None, :]
        vals = f(nodes.ravel()).reshape(nodes.shape)
        piece = half * (vals @ _GAUSS3_W)
        cell_of_piece = np.searchsorted(edges, mids) - 1
        sums = np.zeros(grid.m)
        np.add.at(sums, cell_of_piece, piece)
        return sums / grid.h


def exact_step_solution(p: float, a: float, x, t: float):
    """Exact (u, q) of the step problem at positions x and time t."""
    sol = StepRiemannSolution(IsothermSpec(a=a, p=p))
    u = sol.u(x, t)
    return u, np.asarray(sol.isotherm.F(u))


def fine_grid_oracle(problem, ic: Callable,
                     cfg: SchemeConfig, t_final: float, n_steps: int,
                     refine: int = 4) -> np.ndarray:
    """Reference cell averages from a refined high-resolution run.

    The problem (1D or 2D) is re-run with the high resolution scheme on a
    grid refined by the integer factor refine (both in space and time), and
    the result is averaged back onto the coarse cells. Returns the coarse
    interior field.
    """
    if refine < 4:
        raise ValueError(f"refinement factor must be at least 4, got {refine}")
    coarse = problem.grid
    fine_cfg = replace(cfg, scheme="hires_weno")
    if isinstance(problem, Problem1D):
        fine = Grid1D(coarse.x_left, coarse.x_right, refine * coarse.m,
                      ghost=coarse.ghost)
        fine_problem = replace(problem, grid=fine)
        result = run_1d(fine_problem, ic(fine), fine_cfg, t_final,
                        refine * n_steps)
        return result.interior_u.reshape(coarse.m, refine).mean(axis=1)
    fine = Grid2D(coarse.x_left, coarse.x_right, refine * coarse.m,
                  ghost=coarse.ghost)
    fine_problem = replace(problem, grid=fine)
    result = run_2d(fine_problem, ic(fine), fine_cfg, t_final,
                    refine * n_steps)
    return restrict_2d(result.interior_u, refine)


def restrict_2d(u_fine: np.ndarray, refine: int) -> np.ndarray:
    """Average a fine 2D interior field over refine x refine blocks."""
    m = u_fine.shape[0] // refine
    return (u_fine.reshape(m, refine, m, refine).mean(axis=(1, 3)))
