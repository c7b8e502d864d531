"""Exact step-problem profiles and the fine-grid reference runner."""

from __future__ import annotations

import numpy as np
import pytest

from sorptran import (DirichletBC, DomainError, Grid1D, IsothermSpec,
                      Problem1D, SchemeConfig, StepRiemannSolution,
                      exact_step_solution, fine_grid_oracle)
from sorptran.exact import restrict_2d
from sorptran.velocity import ConstantVelocity

from oracles import quad_cell_averages


def _solution(p, a=1.0):
    return StepRiemannSolution(IsothermSpec(a=a, p=p))


def test_wave_speeds():
    sol = _solution(0.5, a=1.0)
    assert sol.shock_speed == pytest.approx(0.5)
    assert sol.fan_edge_speed == pytest.approx(1.0 / 1.5)
    # Rankine-Hugoniot across the unit jump: flux of q is u(q), so the
    # speed is (u_R - u_L) / (q_R - q_L) = 1 / F(1)
    assert sol.shock_speed == pytest.approx(1.0 / sol.isotherm.F(1.0))


def test_interaction_time():
    assert _solution(0.5).t_interact == pytest.approx(6.0)
    # the fan edge breakpoint must land on the shock at t_interact
    sol = _solution(0.25, a=2.0)
    t = sol.t_interact * (1.0 - 1e-12)
    b = sol.breakpoints(t)
    assert b[1] == pytest.approx(b[2], abs=1e-9)


def test_time_domain_is_enforced():
    sol = _solution(0.5)
    with pytest.raises(DomainError):
        sol.u(np.array([0.5]), -0.1)
    with pytest.raises(DomainError):
        sol.u(np.array([0.5]), sol.t_interact)
    with pytest.raises(DomainError):
        sol.breakpoints(7.0)


def test_initial_profile_is_the_step():
    sol = _solution(0.75)
    x = np.array([-0.5, 0.25, 0.999, 1.001])
    assert np.array_equal(sol.u(x, 0.0), [0.0, 1.0, 1.0, 0.0])


def test_sharpening_profile_layout():
    # p < 1: fan anchored at 0, plateau, shock launched from x = 1
    sol = _solution(0.5)
    t = 2.0
    head, shock = t * sol.fan_edge_speed, 1.0 + t * sol.shock_speed
    assert sol.breakpoints(t) == pytest.approx((0.0, head, shock))
    assert sol.u(np.array([-0.1]), t)[0] == 0.0
    assert sol.u(np.array([0.5 * (head + shock)]), t)[0] == 1.0
    assert sol.u(np.array([shock + 1e-9]), t)[0] == 0.0
    # fan values x^2 / (4 (t - x)^2) for a = 1, p = 1/2
    x = np.array([0.4, 0.9, 1.2])
    assert sol.u(x, t) == pytest.approx(x ** 2 / (4.0 * (t - x) ** 2))


def test_spreading_profile_layout():
    # p > 1: shock launched from x = 0, plateau, fan anchored at x = 1
    sol = _solution(2.0)
    t = 1.0
    shock = t * sol.shock_speed
    edge, tail = 1.0 + t * sol.fan_edge_speed, 1.0 + t
    assert sol.breakpoints(t) == pytest.approx((shock, edge, tail))
    assert sol.u(np.array([shock - 1e-9]), t)[0] == 0.0
    assert sol.u(np.array([0.5 * (shock + edge)]), t)[0] == 1.0
    assert sol.u(np.array([tail + 1e-9]), t)[0] == 0.0
    # fan values (t/(x-1) - 1) / 2 for a = 1, p = 2
    x = np.array([1.4, 1.6, 1.9])
    assert sol.u(x, t) == pytest.approx((t / (x - 1.0) - 1.0) / 2.0)


@pytest.mark.parametrize("p,a", [(0.25, 1.0), (0.5, 2.0), (3.0, 1.0)])
def test_fan_satisfies_characteristic_relation(p, a):
    # inside the fan x/t (measured from the anchor) equals 1/F'(u)
    sol = _solution(p, a=a)
    t = 1.5
    lo, hi = (sol.breakpoints(t)[:2] if p < 1.0
              else sol.breakpoints(t)[1:])
    x = np.linspace(lo, hi, 41)[1:-1]
    u = sol.u(x, t)
    anchor = 0.0 if p < 1.0 else 1.0
    speeds = 1.0 / (1.0 + a * p * u ** (p - 1.0))
    assert np.allclose((x - anchor) / t, speeds, rtol=1e-12)


def test_linear_exponent_translates_rigidly():
    sol = _solution(1.0, a=3.0)
    assert sol.is_linear
    assert sol.t_interact == np.inf
    x = np.array([0.3, 0.8, 1.1, 1.3])
    t = 1.0
    assert np.array_equal(sol.u(x, t), sol.u(x - 0.25 * t, 0.0))


def test_conserved_field_is_total_concentration():
    sol = _solution(0.5)
    x = np.linspace(-0.5, 3.0, 57)
    t = 1.7
    assert np.allclose(sol.q(x, t),
                       np.asarray(sol.isotherm.F(sol.u(x, t))))


def test_exact_step_solution_wrapper():
    x = np.linspace(0.0, 3.0, 13)
    u, q = exact_step_solution(0.5, 1.0, x, 1.0)
    sol = _solution(0.5)
    assert np.array_equal(u, sol.u(x, 1.0))
    assert np.array_equal(q, sol.q(x, 1.0))


@pytest.mark.parametrize("p", [0.5, 2.0])
def test_cell_averages_match_adaptive_quadrature(p):
    sol = _solution(p)
    grid = Grid1D(0.0, 5.0, 40)
    t = 2.0
    pts = sol.breakpoints(t)
    assert np.allclose(sol.cell_averages(grid, t),
                       quad_cell_averages(lambda x: sol.u(x, t), grid, pts),
                       atol=1e-9)
    assert np.allclose(sol.q_cell_averages(grid, t),
                       quad_cell_averages(lambda x: sol.q(x, t), grid, pts),
                       atol=1e-9)


def test_total_mass_is_conserved_in_time():
    # p = 1/4 is the worst case for the quadrature: q grows like
    # distance**(1/3) off the fan anchor, so allow the graded rule ~1e-8
    sol = _solution(0.25)
    grid = Grid1D(-1.0, 8.0, 90)
    mass0 = grid.h * np.sum(sol.q_cell_averages(grid, 0.0))
    mass3 = grid.h * np.sum(sol.q_cell_averages(grid, 3.0))
    assert mass0 == pytest.approx(2.0, abs=1e-12)
    assert mass3 == pytest.approx(mass0, abs=5e-8)


def _bump(x):
    x = np.asarray(x, dtype=np.float64)
    xi = (x - 2.0) / 1.5
    out = np.zeros_like(x)
    inside = np.abs(xi) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - xi[inside] ** 2))
    return out


def test_fine_grid_oracle_reproduces_linear_translation():
    # with p = 1 the equation is linear advection at speed v / (1 + a)
    grid = Grid1D(0.0, 10.0, 50)
    problem = Problem1D(grid, IsothermSpec(a=1.0, p=1.0), ConstantVelocity(1.0),
                        DirichletBC(0.0), DirichletBC(0.0))
    cfg = SchemeConfig(scheme="hires_weno")
    t_final = 2.0

    shifted = quad_cell_averages(lambda x: _bump(x - 0.5 * t_final), grid)

    def error(refine):
        oracle = fine_grid_oracle(problem, lambda g: _bump(g.cell_centers()),
                                  cfg, t_final, 50, refine=refine)
        return grid.h * np.sum(np.abs(oracle - shifted))

    coarse, fine = error(4), error(8)
    assert coarse < 0.02
    assert fine < 0.5 * coarse


def test_fine_grid_oracle_rejects_small_refinement():
    grid = Grid1D(0.0, 1.0, 8)
    problem = Problem1D(grid, IsothermSpec(), ConstantVelocity(1.0),
                        DirichletBC(0.0), DirichletBC(0.0))
    with pytest.raises(ValueError):
        fine_grid_oracle(problem, lambda g: np.zeros(g.m),
                         SchemeConfig(), 1.0, 8, refine=2)


def test_restrict_2d_block_means():
    fine = np.arange(16.0).reshape(4, 4)
    out = restrict_2d(fine, 2)
    assert out.shape == (2, 2)
    assert out[0, 0] == pytest.approx(np.mean([0.0, 1.0, 4.0, 5.0]))
    assert out[1, 1] == pytest.approx(np.mean([10.0, 11.0, 14.0, 15.0]))
