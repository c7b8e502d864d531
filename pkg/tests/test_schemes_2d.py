"""Single steps and short runs of the 2D schemes."""

from __future__ import annotations

import numpy as np
import pytest

from sorptran import (DirichletBC, Grid1D, Grid2D, IsothermSpec, Problem1D,
                      Problem2D, SchemeConfig, courant_max_2d, run_1d, run_2d)
from sorptran.schemes_2d import step_hires_weno_2d, step_implicit1_2d
from sorptran.velocity import (ConstantVelocity, ConstantVelocity2D,
                               RotationVelocity, edge_split_2d)


def _problem(grid, p=0.5, velocity=None, bc=0.0):
    return Problem2D(grid, IsothermSpec(a=1.0, p=p),
                     velocity or ConstantVelocity2D(1.0, 0.0),
                     DirichletBC(bc))


def _blob(grid, cx, cy, radius=0.25):
    c = grid.cell_centers()
    x, y = np.meshgrid(c, c, indexing="ij")
    r2 = ((x - cx) ** 2 + (y - cy) ** 2) / radius ** 2
    return np.where(r2 < 1.0, np.cos(0.5 * np.pi * np.sqrt(r2)) ** 2, 0.0)


@pytest.mark.parametrize("scheme", ["implicit1", "hires_weno"])
def test_constant_state_is_a_fixed_point(scheme):
    grid = Grid2D(-1.0, 1.0, 16)
    problem = _problem(grid, velocity=RotationVelocity(), bc=0.6)
    run = run_2d(problem, np.full((grid.m, grid.m), 0.6),
                 SchemeConfig(scheme=scheme), 0.1, 4)
    assert np.max(np.abs(run.interior_u - 0.6)) < 1e-13


@pytest.mark.parametrize("scheme", ["implicit1", "hires_weno"])
def test_axis_aligned_flow_reduces_to_1d(scheme):
    # with w = 0 and y-independent data every row must evolve exactly like
    # the corresponding 1D problem
    m = 40
    grid2 = Grid2D(0.0, 4.0, m)
    grid1 = Grid1D(0.0, 4.0, m)
    x = grid1.cell_centers()
    profile = np.where((x > 0.5) & (x <= 1.5), 1.0, 0.0)
    cfg = SchemeConfig(scheme=scheme)

    run2 = run_2d(_problem(grid2), np.tile(profile[:, None], (1, m)),
                  cfg, 0.8, 16)
    run1 = run_1d(Problem1D(grid1, IsothermSpec(a=1.0, p=0.5),
                            ConstantVelocity(1.0),
                            DirichletBC(0.0), DirichletBC(0.0)),
                  profile, cfg, 0.8, 16)
    assert np.max(np.abs(run2.interior_u - run1.interior_u[:, None])) < 1e-9


def test_rotation_preserves_mass_and_bounds():
    grid = Grid2D(-1.0, 1.0, 40)
    problem = _problem(grid, velocity=RotationVelocity())
    u0 = _blob(grid, 0.5, 0.0)
    run = run_2d(problem, u0, SchemeConfig(scheme="hires_weno"), 0.125, 13)
    assert run.conservation_defect_max < 1e-11
    assert abs(run.boundary_flux_net) < 1e-12
    assert run.mass_final == pytest.approx(run.mass_initial, rel=1e-12)
    # rigid rotation is divergence free, so the data range is invariant
    assert run.u_min_seen > -1e-12
    assert run.u_max_seen < float(np.max(u0)) + 1e-12


def test_linear_blob_rotates_at_the_retarded_rate():
    # p = 1 gives rigid rotation at rate/F'(1) = pi; a quarter period
    # of the retarded motion moves the blob through 45 degrees
    grid = Grid2D(-1.0, 1.0, 40)
    problem = _problem(grid, p=1.0, velocity=RotationVelocity(rate=2.0 * np.pi))
    u0 = _blob(grid, 0.5, 0.0)
    run = run_2d(problem, u0, SchemeConfig(scheme="hires_weno"), 0.25, 25)
    c = grid.cell_centers()
    x, y = np.meshgrid(c, c, indexing="ij")
    w = run.interior_u / np.sum(run.interior_u)
    target = 0.5 / np.sqrt(2.0)
    assert np.sum(w * x) == pytest.approx(target, abs=2.0 * grid.h)
    assert np.sum(w * y) == pytest.approx(target, abs=2.0 * grid.h)


def test_disabled_reconstruction_reduces_to_first_order():
    grid = Grid2D(-1.0, 1.0, 24)
    problem = _problem(grid, p=0.75, velocity=RotationVelocity())
    rng = np.random.default_rng(5)
    c = grid.cell_centers()
    x, y = np.meshgrid(c, c, indexing="ij")
    u0 = 0.4 + 0.2 * np.sin(np.pi * x) * np.cos(np.pi * y) \
        + 0.05 * rng.uniform(size=(grid.m, grid.m))
    splits = edge_split_2d(grid, problem.velocity)
    cfg = SchemeConfig()
    tau = 0.01

    def prepare():
        u = np.zeros((grid.ntot, grid.ntot))
        u[grid.interior] = u0
        return u, np.asarray(problem.isotherm.F(u))

    u, q = prepare()
    base, _, _ = step_implicit1_2d(u, q, splits, tau, 0.0, problem, cfg)
    u, q = prepare()
    limited, _, _ = step_hires_weno_2d(u, q, splits, tau, 0.0, problem, cfg,
                                       limiter_override=0.0)
    assert np.max(np.abs(limited - base)) < 1e-13


def test_courant_helper_is_directional():
    grid = Grid2D(0.0, 1.0, 10)
    cx, cy = courant_max_2d(grid, ConstantVelocity2D(2.0, -1.0), 0.05)
    assert cx == pytest.approx(1.0)
    assert cy == pytest.approx(0.5)


def test_run_2d_validates_inputs():
    grid = Grid2D(0.0, 1.0, 8)
    problem = _problem(grid)
    with pytest.raises(ValueError):
        run_2d(problem, np.zeros(grid.m), SchemeConfig(), 1.0, 4)
    with pytest.raises(ValueError):
        run_2d(problem, np.zeros((grid.m, grid.m)),
               SchemeConfig(scheme="explicit1"), 1.0, 4)
