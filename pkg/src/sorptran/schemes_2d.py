"""Finite volume schemes on the square 2D grid.

Dimension-by-dimension versions of the implicit 1D schemes: the cell update
couples the four face fluxes, each reconstructed exactly as in one space
dimension along its own axis. The Gauss-Seidel iteration cycles through the
four corner sweep orderings so information can travel along any velocity
direction; convergence is checked after every ordering. As in 1D, a final
conservative flux pass makes the discrete mass balance exact up to rounding.
"""

from __future__ import annotations

import time
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import NewtonError, SweepError
from .stepping import (LimiterState2D, Problem2D, RunResult, SchemeConfig,
                       StepDiagnostics)
from .velocity import edge_split_2d


def courant_max_2d(grid, velocity, tau: float) -> tuple[float, float]:
    """Directional Courant numbers (C_x, C_y) over the interior cell faces.

    C_x samples the first velocity component on the vertical faces
    (edge x, center y), C_y the second on the horizontal faces.
    """
    e = grid.edges()
    c = grid.cell_centers()
    xg, yg = np.meshgrid(e, c, indexing="ij")
    vx, _ = velocity(xg, yg)
    xg, yg = np.meshgrid(c, e, indexing="ij")
    _, vy = velocity(xg, yg)
    cx = tau / grid.h * float(np.max(np.abs(vx)))
    cy = tau / grid.h * float(np.max(np.abs(vy)))
    return cx, cy


def _orderings(grid):
    g, m = grid.ghost, grid.m
    asc = (g, g + m, 1)
    desc = (g + m - 1, g - 1, -1)
    return (asc + asc, desc + asc, desc + desc, asc + desc)


def _sweep_cycle(sweep_once, grid, cfg):
    """Cycle the four sweep orderings until the largest update is small."""
    orderings = _orderings(grid)
    iters = 0
    for sweep in range(cfg.max_sweeps):
        dmax, it, ok = sweep_once(*orderings[sweep % 4])
        iters += it
        if not ok:
            raise NewtonError(f"cell solve stalled in sweep {sweep + 1}")
        if dmax < cfg.sweep_tol:
            return sweep + 1, iters
    raise SweepError(
        f"no convergence in {cfg.max_sweeps} sweeps, last update {dmax:.3e}")


def _invert_interior_2d(u, q, grid, iso, newton):
    iters, ok = kernels.invert_rect(u, q, iso.a, iso.p,
                                    grid.ghost, grid.ghost + grid.m,
                                    grid.ghost, grid.ghost + grid.m,
                                    newton.abs_tol, newton.max_iter,
                                    newton.reg_floor)
    if not ok:
        raise NewtonError("cell inversion did not converge")
    return iters


def _conservative_update_2d(q, un, u, grid, iso, cfg, tau, splits, state,
                            predictor=None):
    """Flux-form q update from the converged field.

    Returns (u_final, q_new, extra_newton_iters, fluxes) where fluxes are
    the time-integrated face sums (left, right, bottom, top). If predictor
    is given, the antidiffusive part of every face flux is clipped against
    the invariant interval of the step data exactly as in one dimension,
    with the cell budgets shared over all four faces.
    """
    vpx, vmx, wpy, wmy = splits
    g, m = grid.ghost, grid.m
    cells = slice(g, g + m)
    xe = slice(g, g + m + 1)
    rh = tau / grid.h
    if state is None:
        upx = un[g - 1: g + m, cells]
        umx = un[g: g + m + 1, cells]
        upy = un[cells, g - 1: g + m]
        umy = un[cells, g: g + m + 1]
        phix = vpx[xe, cells] * upx + vmx[xe, cells] * umx
        phiy = wpy[cells, xe] * upy + wmy[cells, xe] * umy
    else:
        upx = np.zeros((grid.ntot + 1, grid.ntot))
        umx = np.zeros((grid.ntot + 1, grid.ntot))
        upy = np.zeros((grid.ntot, grid.ntot + 1))
        umy = np.zeros((grid.ntot, grid.ntot + 1))
        kernels.interfaces_limited_2d_x(un, u, state.omega_x_plus,
                                        state.omega_x_minus, state.l_x_plus,
                                        state.l_x_minus, g, g + m + 1,
                                        g, g + m, upx, umx)
        kernels.interfaces_limited_2d_y(un, u, state.omega_y_plus,
                                        state.omega_y_minus, state.l_y_plus,
                                        state.l_y_minus, g, g + m,
                                        g, g + m + 1, upy, umy)
        phix = vpx[xe, cells] * upx[xe, cells] + vmx[xe, cells] * umx[xe, cells]
        phiy = wpy[cells, xe] * upy[cells, xe] + wmy[cells, xe] * umy[cells, xe]
    if predictor is not None:
        phix1 = vpx[xe, cells] * predictor[g - 1: g + m, cells] \
            + vmx[xe, cells] * predictor[g: g + m + 1, cells]
        phiy1 = wpy[cells, xe] * predictor[cells, g - 1: g + m] \
            + wmy[cells, xe] * predictor[cells, g: g + m + 1]
        lo = min(float(u.min()),
                 float(un[:g, :].min()), float(un[g + m:, :].min()),
                 float(un[:, :g].min()), float(un[:, g + m:].min()))
        hi = max(float(u.max()),
                 float(un[:g, :].max()), float(un[g + m:, :].max()),
                 float(un[:, :g].max()), float(un[:, g + m:].max()))
        # the data range can widen by exp(tau * max|div v|) over the step
        # (see the 1D update); a divergence free field keeps it exact
        ve = vpx[xe, cells] + vmx[xe, cells]
        we = wpy[cells, xe] + wmy[cells, xe]
        vgrad = (float(np.max(np.abs(np.diff(ve, axis=0))))
                 + float(np.max(np.abs(np.diff(we, axis=1))))) / grid.h
        fac = float(np.exp(tau * vgrad))
        hi = hi * fac if hi > 0.0 else hi / fac
        lo = lo / fac if lo > 0.0 else lo * fac
        qlo = float(np.sign(lo) * iso.F(abs(lo)))
        qhi = float(np.sign(hi) * iso.F(abs(hi)))
        phix, phiy = _flux_corrected_2d(q[cells, cells], phix1, phix - phix1,
                                        phiy1, phiy - phiy1, rh, qlo, qhi)
    qn = q.copy()
    qn[cells, cells] = (q[cells, cells]
                        - rh * (phix[1:, :] - phix[:-1, :])
                        - rh * (phiy[:, 1:] - phiy[:, :-1]))
    uf = un.copy()
    iters = _invert_interior_2d(uf, qn, grid, iso, cfg.newton)
    fluxes = (float(tau * np.sum(phix[0, :])), float(tau * np.sum(phix[-1, :])),
              float(tau * np.sum(phiy[:, 0])), float(tau * np.sum(phiy[:, -1])))
    return uf, qn, iters, fluxes


def _flux_corrected_2d(qold, phix1, antix, phiy1, antiy, rh, qlo, qhi,
                       max_passes=64):
    """Clip the antidiffusive face fluxes against the bounds [qlo, qhi].

    Same iterated budget construction as _flux_corrected in one dimension,
    except that the admissible gain and loss of a cell is shared over its
    four faces and every face takes the smaller ratio of its two cells.
    """
    s = qold - rh * (phix1[1:, :] - phix1[:-1, :]) \
        - rh * (phiy1[:, 1:] - phiy1[:, :-1])
    applied_x = np.zeros_like(antix)
    applied_y = np.zeros_like(antiy)
    rem_x = antix.copy()
    rem_y = antiy.copy()
    one_row = np.ones((1, s.shape[1]))
    one_col = np.ones((s.shape[0], 1))
    for _ in range(max_passes):
        gain = rh * (np.maximum(rem_x[:-1, :], 0.0)
                     - np.minimum(rem_x[1:, :], 0.0)
                     + np.maximum(rem_y[:, :-1], 0.0)
                     - np.minimum(rem_y[:, 1:], 0.0))
        loss = rh * (np.maximum(rem_x[1:, :], 0.0)
                     - np.minimum(rem_x[:-1, :], 0.0)
                     + np.maximum(rem_y[:, 1:], 0.0)
                     - np.minimum(rem_y[:, :-1], 0.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            r_up = np.where(gain > 0.0,
                            np.minimum(1.0, np.maximum(qhi - s, 0.0) / gain),
                            1.0)
            r_dn = np.where(loss > 0.0,
                            np.minimum(1.0, np.maximum(s - qlo, 0.0) / loss),
                            1.0)
        theta_x = np.ones_like(rem_x)
        pos = rem_x > 0.0
        neg = rem_x < 0.0
        theta_x[pos] = np.minimum(np.vstack([one_row, r_dn]),
                                  np.vstack([r_up, one_row]))[pos]
        theta_x[neg] = np.minimum(np.vstack([one_row, r_up]),
                                  np.vstack([r_dn, one_row]))[neg]
        theta_y = np.ones_like(rem_y)
        pos = rem_y > 0.0
        neg = rem_y < 0.0
        theta_y[pos] = np.minimum(np.hstack([one_col, r_dn]),
                                  np.hstack([r_up, one_col]))[pos]
        theta_y[neg] = np.minimum(np.hstack([one_col, r_up]),
                                  np.hstack([r_dn, one_col]))[neg]
        step_x = theta_x * rem_x
        step_y = theta_y * rem_y
        biggest = max(float(np.max(np.abs(step_x), initial=0.0)),
                      float(np.max(np.abs(step_y), initial=0.0)))
        if rh * biggest < 1e-15:
            break
        s -= rh * (step_x[1:, :] - step_x[:-1, :])
        s -= rh * (step_y[:, 1:] - step_y[:, :-1])
        applied_x += step_x
        applied_y += step_y
        rem_x -= step_x
        rem_y -= step_y
    return phix1 + applied_x, phiy1 + applied_y


def step_implicit1_2d(u, q, splits, tau, t, problem: Problem2D,
                      cfg: SchemeConfig):
    """First order implicit upwind step in 2D."""
    t_start = time.perf_counter()
    grid, iso = problem.grid, problem.isotherm
    vpx, vmx, wpy, wmy = splits
    nw = cfg.newton
    problem.bc.fill_2d(u, grid, t)
    un = u.copy()
    problem.bc.fill_2d(un, grid, t + tau)
    rh = tau / grid.h

    def sweep_once(i0, i1, si, j0, j1, sj):
        return kernels.sweep_first_2d(un, u, q, vpx, vmx, wpy, wmy,
                                      rh, iso.a, iso.p, i0, i1, si, j0, j1, sj,
                                      nw.abs_tol, nw.max_iter, nw.reg_floor)

    sweeps, iters = _sweep_cycle(sweep_once, grid, cfg)
    uf, qn, extra, fluxes = _conservative_update_2d(q, un, u, grid, iso, cfg,
                                                    tau, splits, None)
    diag = StepDiagnostics(sweeps_used=sweeps, newton_iters_total=iters + extra,
                           flux_left=fluxes[0], flux_right=fluxes[1],
                           flux_bottom=fluxes[2], flux_top=fluxes[3],
                           wall_time=time.perf_counter() - t_start)
    return uf, qn, diag


def step_hires_weno_2d(u, q, splits, tau, t, problem: Problem2D,
                       cfg: SchemeConfig,
                       limiter_override: Optional[float] = None):
    """High resolution implicit 2D step with per-axis weights and limiters.

    The final flux pass clips the antidiffusive part of every face flux
    against the invariant interval of the step data, as in one dimension.
    """
    t_start = time.perf_counter()
    grid, iso = problem.grid, problem.isotherm
    g, m = grid.ghost, grid.m
    vpx, vmx, wpy, wmy = splits
    nw = cfg.newton
    problem.bc.fill_2d(u, grid, t)
    un = u.copy()
    problem.bc.fill_2d(un, grid, t + tau)
    rh = tau / grid.h

    def sweep_first(i0, i1, si, j0, j1, sj):
        return kernels.sweep_first_2d(un, u, q, vpx, vmx, wpy, wmy, rh,
                                      iso.a, iso.p, i0, i1, si, j0, j1, sj,
                                      nw.abs_tol, nw.max_iter, nw.reg_floor)

    sweeps, iters = _sweep_cycle(sweep_first, grid, cfg)
    predictor = un.copy()

    nt = grid.ntot
    state = LimiterState2D(
        omega_x_plus=np.full((nt, nt), 0.5), omega_x_minus=np.full((nt, nt), 0.5),
        l_x_plus=np.zeros((nt, nt)), l_x_minus=np.zeros((nt, nt)),
        omega_y_plus=np.full((nt, nt), 0.5), omega_y_minus=np.full((nt, nt), 0.5),
        l_y_plus=np.zeros((nt, nt)), l_y_minus=np.zeros((nt, nt)),
        predictor=predictor)
    source = predictor
    for _ in range(cfg.corrector_rounds):
        kernels.weno_limiters_2d(source, u, cfg.weno_eps,
                                 state.omega_x_plus, state.omega_x_minus,
                                 state.l_x_plus, state.l_x_minus,
                                 state.omega_y_plus, state.omega_y_minus,
                                 state.l_y_plus, state.l_y_minus,
                                 g - 1, g + m + 1, g - 1, g + m + 1)
        if limiter_override is not None:
            state.l_x_plus[:] = limiter_override
            state.l_x_minus[:] = limiter_override
            state.l_y_plus[:] = limiter_override
            state.l_y_minus[:] = limiter_override

        def sweep_limited(i0, i1, si, j0, j1, sj):
            return kernels.sweep_limited_2d(un, u, q, vpx, vmx, wpy, wmy,
                                            rh, iso.a, iso.p,
                                            state.omega_x_plus, state.omega_x_minus,
                                            state.l_x_plus, state.l_x_minus,
                                            state.omega_y_plus, state.omega_y_minus,
                                            state.l_y_plus, state.l_y_minus,
                                            i0, i1, si, j0, j1, sj,
                                            nw.abs_tol, nw.max_iter, nw.reg_floor)

        s2, i2 = _sweep_cycle(sweep_limited, grid, cfg)
        sweeps += s2
        iters += i2
        source = un

    uf, qn, extra, fluxes = _conservative_update_2d(q, un, u, grid, iso, cfg,
                                                    tau, splits, state,
                                                    predictor=state.predictor)
    diag = StepDiagnostics(sweeps_used=sweeps, newton_iters_total=iters + extra,
                           flux_left=fluxes[0], flux_right=fluxes[1],
                           flux_bottom=fluxes[2], flux_top=fluxes[3],
                           wall_time=time.perf_counter() - t_start,
                           limiter=state)
    return uf, qn, diag


_STEPPERS_2D = {
    "implicit1": step_implicit1_2d,
    "hires_weno": step_hires_weno_2d,
}


def run_2d(problem: Problem2D, u0: np.ndarray, cfg: SchemeConfig,
           t_final: float, n_steps: int,
           step_hook: Optional[Callable] = None) -> RunResult:
    """Advance the initial cell averages u0 (shape (M, M)) to t_final."""
    grid, iso = problem.grid, problem.isotherm
    u0 = np.asarray(u0, dtype=np.float64)
    if u0.shape != (grid.m, grid.m):
        raise ValueError(
            f"u0 must have shape ({grid.m}, {grid.m}), got {u0.shape}")
    if cfg.scheme not in _STEPPERS_2D:
        raise ValueError(
            f"scheme {cfg.scheme!r} has no 2D version, "
            f"expected one of {tuple(_STEPPERS_2D)}")
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    splits = edge_split_2d(grid, problem.velocity)
    step_fn = _STEPPERS_2D[cfg.scheme]

    u = np.zeros((grid.ntot, grid.ntot))
    u[grid.interior] = u0
    problem.bc.fill_2d(u, grid, problem.t0)
    q = np.asarray(iso.F(u))

    cell_area = grid.h * grid.h
    mass_initial = cell_area * float(np.sum(q[grid.interior]))
    mass_prev = mass_initial
    flux_net = 0.0
    defect_max = 0.0
    sweeps_total = 0
    sweeps_max = 0
    newton_total = 0
    u_min = float(np.min(u0))
    u_max = float(np.max(u0))

    if n_steps == 0:
        return RunResult(u=u, q=q, grid=grid, t_final=problem.t0,
                         steps_taken=0, wall_time=0.0,
                         sweeps_total=0, sweeps_max=0, newton_iters_total=0,
                         mass_initial=mass_initial, mass_final=mass_initial,
                         boundary_flux_net=0.0, conservation_defect_max=0.0,
                         u_min_seen=u_min, u_max_seen=u_max)

    tau = (t_final - problem.t0) / n_steps
    t_start = time.perf_counter()
    t = problem.t0
    for n in range(n_steps):
        u, q, diag = step_fn(u, q, splits, tau, t, problem, cfg)
        t = problem.t0 + (n + 1) * tau
        sweeps_total += diag.sweeps_used
        sweeps_max = max(sweeps_max, diag.sweeps_used)
        newton_total += diag.newton_iters_total
        step_flux = grid.h * (diag.flux_left - diag.flux_right
                              + diag.flux_bottom - diag.flux_top)
        flux_net += step_flux
        mass = cell_area * float(np.sum(q[grid.interior]))
        defect_max = max(defect_max, abs(mass - mass_prev - step_flux))
        mass_prev = mass
        u_min = min(u_min, float(np.min(u[grid.interior])))
        u_max = max(u_max, float(np.max(u[grid.interior])))
        if step_hook is not None:
            step_hook(n, t, u, q, diag)

    return RunResult(u=u, q=q, grid=grid, t_final=t,
                     steps_taken=n_steps,
                     wall_time=time.perf_counter() - t_start,
                     sweeps_total=sweeps_total, sweeps_max=sweeps_max,
                     newton_iters_total=newton_total,
                     mass_initial=mass_initial, mass_final=mass_prev,
                     boundary_flux_net=flux_net,
                     conservation_defect_max=defect_max,
                     u_min_seen=u_min, u_max_seen=u_max)
