"""Finite volume schemes for the 1D sorption transport equation.

All schemes advance the conserved cell averages q = F(u),

    q_i^{n+1} = q_i^n - (tau/h) * (v_{i+1/2} U_{i+1/2} - v_{i-1/2} U_{i-1/2}),

and differ only in the interface concentrations U. The explicit schemes
evaluate them from the old time level; the implicit schemes couple them to
the new one and are solved cell by cell with alternating Gauss-Seidel
sweeps. Every implicit step finishes with a conservative flux pass: the
interface values of the converged sweep solution are assembled into one
flux array and q is updated from it directly, so the discrete mass balance
holds to rounding regardless of the sweep termination error.
"""

from __future__ import annotations

import time
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import InstabilityError, NewtonError, SweepError
from .stepping import (LimiterState, Problem1D, RunResult, SchemeConfig,
                       StepDiagnostics, fill_ghosts_1d)
from .velocity import edge_split_1d

# explicit solutions larger than this abort the run as blown up
BLOWUP_LIMIT = 1e6


def courant_max_1d(grid, velocity, tau: float) -> float:
    """Courant number tau/h * max |v| over the interior cell edges."""
    v = np.asarray(velocity(grid.edges()), dtype=np.float64)
    return tau / grid.h * float(np.max(np.abs(v)))


def _edge_slices(grid):
    g, m = grid.ghost, grid.m
    return g, m, slice(g, g + m), slice(g, g + m + 1)


def _invert_interior(u, q, grid, iso, newton):
    iters, ok = kernels.invert_range(u, q, iso.a, iso.p, grid.ghost,
                                     grid.ghost + grid.m, newton.abs_tol,
                                     newton.max_iter, newton.reg_floor)
    if not ok:
        raise NewtonError("cell inversion did not converge")
    return iters


def _check_finite(q_int, step_label):
    amax = float(np.max(np.abs(q_int))) if q_int.size else 0.0
    if not np.isfinite(amax) or amax > BLOWUP_LIMIT:
        raise InstabilityError(
            f"{step_label} produced values of magnitude {amax:.3e}",
            max_abs=amax)


def step_explicit1(u, q, vp, vm, tau, t, problem: Problem1D, cfg: SchemeConfig):
    """First order explicit upwind step. Returns (u_new, q_new, diagnostics)."""
    t_start = time.perf_counter()
    grid, iso = problem.grid, problem.isotherm
    g, m, cells, edges = _edge_slices(grid)
    rh = tau / grid.h
    fill_ghosts_1d(u, grid, problem.bc_left, problem.bc_right, t)
    phi = vp[edges] * u[g - 1: g + m] + vm[edges] * u[g: g + m + 1]
    qn = q.copy()
    qn[cells] = q[cells] - rh * (phi[1:] - phi[:-1])
    _check_finite(qn[cells], "explicit step")
    un = u.copy()
    iters = _invert_interior(un, qn, grid, iso, cfg.newton)
    fill_ghosts_1d(un, grid, problem.bc_left, problem.bc_right, t + tau)
    diag = StepDiagnostics(sweeps_used=0, newton_iters_total=iters,
                           flux_left=float(tau * phi[0]),
                           flux_right=float(tau * phi[-1]),
                           edge_flux=phi,
                           wall_time=time.perf_counter() - t_start)
    return un, qn, diag


def step_explicit2(u, q, vp, vm, tau, t, problem: Problem1D, cfg: SchemeConfig):
    """Second order explicit step: central slopes advected half a time step.

    The interface value of the upwind cell c at edge e is
    u_c + (1/2 - (tau/2h) v_e / F'(u_c)) * s_c with the central slope
    s_c = (u_{c+1} - u_{c-1})/2, the usual half-step evolution along
    characteristics of the transformed equation. No limiting is applied, so
    this scheme is only meant for smooth data.
    """
    t_start = time.perf_counter()
    grid, iso = problem.grid, problem.isotherm
    g, m, cells, edges = _edge_slices(grid)
    rh = tau / grid.h
    fill_ghosts_1d(u, grid, problem.bc_left, problem.bc_right, t)
    slope = np.zeros_like(u)
    slope[1:-1] = 0.5 * (u[2:] - u[:-2])
    ve = vp[edges] + vm[edges]
    cl = u[g - 1: g + m]
    cr = u[g: g + m + 1]
    up = cl + (0.5 - 0.5 * rh * ve / iso.dF(cl, cfg.newton.reg_floor)) \
        * slope[g - 1: g + m]
    um = cr + (-0.5 - 0.5 * rh * ve / iso.dF(cr, cfg.newton.reg_floor)) \
        * slope[g: g + m + 1]
    phi = vp[edges] * up + vm[edges] * um
    qn = q.copy()
    qn[cells] = q[cells] - rh * (phi[1:] - phi[:-1])
    _check_finite(qn[cells], "explicit second order step")
    un = u.copy()
    iters = _invert_interior(un, qn, grid, iso, cfg.newton)
    fill_ghosts_1d(un, grid, problem.bc_left, problem.bc_right, t + tau)
    diag = StepDiagnostics(sweeps_used=0, newton_iters_total=iters,
                           flux_left=float(tau * phi[0]),
                           flux_right=float(tau * phi[-1]),
                           edge_flux=phi,
                           wall_time=time.perf_counter() - t_start)
    return un, qn, diag


def _sweep_to_convergence(sweep_once, grid, cfg):
    """Alternate sweep directions until the largest cell update is small.

    sweep_once(i0, i1, step) -> (dmax, newton_iters, converged). Returns
    (sweeps_used, newton_iters_total).
    """
    g, m = grid.ghost, grid.m
    directions = ((g, g + m, 1), (g + m - 1, g - 1, -1))
    iters = 0
    for sweep in range(cfg.max_sweeps):
        i0, i1, step = directions[sweep % 2]
        dmax, it, ok = sweep_once(i0, i1, step)
        iters += it
        if not ok:
            raise NewtonError(f"cell solve stalled in sweep {sweep + 1}")
        if dmax < cfg.sweep_tol:
            return sweep + 1, iters
    raise SweepError(
        f"no convergence in {cfg.max_sweeps} sweeps, last update {dmax:.3e}")


def _conservative_update(q, un, u, grid, iso, cfg, rh, vp, vm, state,
                         predictor=None):
    """Assemble interface fluxes of the converged field and update q.

    state carries the limiter data of the step (None for the first order
    scheme). If predictor is given, the antidiffusive part of each edge flux
    (limited flux minus first order predictor flux) is scaled back just
    enough that every updated cell stays inside the invariant interval of
    the step data; see _flux_corrected below. Returns
    (u_final, q_new, extra_newton_iters, phi).
    """
    g, m, cells, edges = _edge_slices(grid)
    up = np.zeros(grid.ntot + 1)
    um = np.zeros(grid.ntot + 1)
    if state is None:
        kernels.interfaces_first_1d(un, g, g + m + 1, up, um)
    else:
        kernels.interfaces_limited_1d(un, u, state.omega_plus, state.omega_minus,
                                      state.l_plus, state.l_minus,
                                      g, g + m + 1, up, um)
    phi = vp[edges] * up[edges] + vm[edges] * um[edges]
    if predictor is not None:
        phi1 = vp[edges] * predictor[g - 1: g + m] \
            + vm[edges] * predictor[g: g + m + 1]
        lo = min(float(u.min()), float(un[:g].min()), float(un[g + m:].min()))
        hi = max(float(u.max()), float(un[:g].max()), float(un[g + m:].max()))
        # u obeys no maximum principle under variable velocity: along a
        # characteristic du/dt = -u v'/F' with F' >= 1, so the data range
        # can widen by at most exp(tau * max|v'|) over the step. Constant
        # velocity keeps the interval exact.
        ve = vp[edges] + vm[edges]
        vgrad = float(np.max(np.abs(np.diff(ve)))) / grid.h
        fac = float(np.exp(rh * grid.h * vgrad))
        hi = hi * fac if hi > 0.0 else hi / fac
        lo = lo / fac if lo > 0.0 else lo * fac
        # odd extension of F covers the roundoff-negative state a converged
        # inversion may carry
        qlo = float(np.sign(lo) * iso.F(abs(lo)))
        qhi = float(np.sign(hi) * iso.F(abs(hi)))
        phi = _flux_corrected(q[cells], phi1, phi - phi1, rh, qlo, qhi)
    qn = q.copy()
    qn[cells] = q[cells] - rh * (phi[1:] - phi[:-1])
    uf = un.copy()
    iters = _invert_interior(uf, qn, grid, iso, cfg.newton)
    return uf, qn, iters, phi


def _flux_corrected(qold, phi1, anti, rh, qlo, qhi, max_passes=64):
    """Clip the antidiffusive edge fluxes against the bounds [qlo, qhi].

    phi1 is the first order flux of the (monotone, hence bounded) predictor,
    anti the antidiffusive remainder. Each cell budget is split Zalesak
    style: the admissible gain of cell i is qhi - s_i with s the running
    state, the admissible loss s_i - qlo, and every edge takes the smaller
    of the ratios of its two cells, so the applied part of the fluxes cannot
    move any cell out of [qlo, qhi] no matter how the signs mix.

    The one-sided budgets are pessimistic wherever large transport fluxes of
    both signs nearly cancel, which at Courant numbers above one happens
    across entire smooth regions riding a bound. The clipping is therefore
    repeated on the remainders: every pass applies what the budgets admit
    and thereby restores the margins its net effect earns, so smooth fluxes
    are recovered over the passes while a genuine overshoot (margin exactly
    zero) stays clamped. Passes stop when nothing admissible is left.
    """
    s = qold - rh * (phi1[1:] - phi1[:-1])
    applied = np.zeros_like(anti)
    remaining = anti.copy()
    for _ in range(max_passes):
        gain = rh * (np.maximum(remaining[:-1], 0.0)
                     - np.minimum(remaining[1:], 0.0))
        loss = rh * (np.maximum(remaining[1:], 0.0)
                     - np.minimum(remaining[:-1], 0.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            r_up = np.where(gain > 0.0,
                            np.minimum(1.0, np.maximum(qhi - s, 0.0) / gain),
                            1.0)
            r_dn = np.where(loss > 0.0,
                            np.minimum(1.0, np.maximum(s - qlo, 0.0) / loss),
                            1.0)
        # edge e sits between cells e-1 and e; boundary edges see one cell
        theta = np.ones_like(remaining)
        pos = remaining > 0.0
        neg = remaining < 0.0
        left_dn = np.append(1.0, r_dn)   # donor cell for positive fluxes
        left_up = np.append(1.0, r_up)
        right_up = np.append(r_up, 1.0)  # receiver cell for positive fluxes
        right_dn = np.append(r_dn, 1.0)
        theta[pos] = np.minimum(left_dn, right_up)[pos]
        theta[neg] = np.minimum(left_up, right_dn)[neg]
        step = theta * remaining
        if rh * float(np.max(np.abs(step), initial=0.0)) < 1e-15:
            break
        s -= rh * (step[1:] - step[:-1])
        applied += step
        remaining -= step
    return phi1 + applied


def step_implicit1(u, q, vp, vm, tau, t, problem: Problem1D, cfg: SchemeConfig):
    """First order implicit upwind step solved by Gauss-Seidel sweeps."""
    t_start = time.perf_counter()
    grid, iso = problem.grid, problem.isotherm
    rh = tau / grid.h
    nw = cfg.newton
    fill_ghosts_1d(u, grid, problem.bc_left, problem.bc_right, t)
    un = u.copy()
    fill_ghosts_1d(un, grid, problem.bc_left, problem.bc_right, t + tau)

    def sweep_once(i0, i1, step):
        return kernels.sweep_first_1d(un, u, q, vp, vm, rh, iso.a, iso.p,
                                      i0, i1, step, nw.abs_tol, nw.max_iter,
                                      nw.reg_floor)

    sweeps, iters = _sweep_to_convergence(sweep_once, grid, cfg)
    uf, qn, extra, phi = _conservative_update(q, un, u, grid, iso, cfg, rh,
                                              vp, vm, None)
    diag = StepDiagnostics(sweeps_used=sweeps, newton_iters_total=iters + extra,
                           flux_left=float(tau * phi[0]),
                           flux_right=float(tau * phi[-1]),
                           edge_flux=phi,
                           wall_time=time.perf_counter() - t_start)
    return uf, qn, diag


def _constant_limiter_state(grid, omega, level):
    n = grid.ntot
    return LimiterState(omega_plus=np.full(n, omega),
                        omega_minus=np.full(n, omega),
                        l_plus=np.full(n, level),
                        l_minus=np.full(n, level))


def step_compact2(u, q, vp, vm, tau, t, problem: Problem1D, cfg: SchemeConfig,
                  limiter_override: Optional[float] = None):
    """Compact second order implicit step with a fixed blend weight.

    The interface reconstruction is applied everywhere at full strength
    (l = 1), so the scheme is genuinely second order but not monotone.
    limiter_override replaces the limiter with a constant, mainly to check
    that l = 0 reproduces the first order scheme.
    """
    t_start = time.perf_counter()
    grid, iso = problem.grid, problem.isotherm
    rh = tau / grid.h
    nw = cfg.newton
    level = 1.0 if limiter_override is None else float(limiter_override)
    state = _constant_limiter_state(grid, cfg.omega, level)
    fill_ghosts_1d(u, grid, problem.bc_left, problem.bc_right, t)
    un = u.copy()
    fill_ghosts_1d(un, grid, problem.bc_left, problem.bc_right, t + tau)

    def sweep_once(i0, i1, step):
        return kernels.sweep_limited_1d(un, u, q, vp, vm, rh, iso.a, iso.p,
                                        state.omega_plus, state.omega_minus,
                                        state.l_plus, state.l_minus,
                                        i0, i1, step, nw.abs_tol, nw.max_iter,
                                        nw.reg_floor)

    sweeps, iters = _sweep_to_convergence(sweep_once, grid, cfg)
    uf, qn, extra, phi = _conservative_update(q, un, u, grid, iso, cfg, rh,
                                              vp, vm, state)
    diag = StepDiagnostics(sweeps_used=sweeps, newton_iters_total=iters + extra,
                           flux_left=float(tau * phi[0]),
                           flux_right=float(tau * phi[-1]),
                           edge_flux=phi,
                           wall_time=time.perf_counter() - t_start,
                           limiter=state)
    return uf, qn, diag


def step_hires_weno(u, q, vp, vm, tau, t, problem: Problem1D, cfg: SchemeConfig,
                    limiter_override: Optional[float] = None):
    """High resolution implicit step: WENO-weighted and range-limited.

    A converged first order step serves as predictor; its one-sided jumps
    set the blend weights, and the limiters cut each interface value back
    into the local solution envelope. The corrector then solves the limited
    scheme with those frozen coefficients, warm-started from the predictor.
    Further corrector rounds (cfg.corrector_rounds > 1) recompute the
    coefficients from the latest corrector solution.

    The frozen coefficients are certified against the predictor, and at
    Courant numbers above one a discontinuity can sharpen so much between
    predictor and corrector that the certified interface values still feed
    an over- or undershoot. The final flux pass therefore clips the
    antidiffusive part of every edge flux against the invariant interval of
    the step data, which restores the discrete min/max principle of the
    first order scheme without touching smooth regions.
    """
    t_start = time.perf_counter()
    grid, iso = problem.grid, problem.isotherm
    g, m = grid.ghost, grid.m
    rh = tau / grid.h
    nw = cfg.newton
    fill_ghosts_1d(u, grid, problem.bc_left, problem.bc_right, t)
    un = u.copy()
    fill_ghosts_1d(un, grid, problem.bc_left, problem.bc_right, t + tau)

    def sweep_first(i0, i1, step):
        return kernels.sweep_first_1d(un, u, q, vp, vm, rh, iso.a, iso.p,
                                      i0, i1, step, nw.abs_tol, nw.max_iter,
                                      nw.reg_floor)

    sweeps, iters = _sweep_to_convergence(sweep_first, grid, cfg)
    predictor = un.copy()

    n = grid.ntot
    state = LimiterState(omega_plus=np.full(n, 0.5), omega_minus=np.full(n, 0.5),
                         l_plus=np.zeros(n), l_minus=np.zeros(n),
                         predictor=predictor)
    source = predictor
    for _ in range(cfg.corrector_rounds):
        kernels.weno_limiters_1d(source, u, cfg.weno_eps,
                                 state.omega_plus, state.omega_minus,
                                 state.l_plus, state.l_minus, g - 1, g + m + 1)
        if limiter_override is not None:
            state.l_plus[:] = limiter_override
            state.l_minus[:] = limiter_override

        def sweep_limited(i0, i1, step):
            return kernels.sweep_limited_1d(un, u, q, vp, vm, rh, iso.a, iso.p,
                                            state.omega_plus, state.omega_minus,
                                            state.l_plus, state.l_minus,
                                            i0, i1, step, nw.abs_tol,
                                            nw.max_iter, nw.reg_floor)

        s2, i2 = _sweep_to_convergence(sweep_limited, grid, cfg)
        sweeps += s2
        iters += i2
        source = un

    uf, qn, extra, phi = _conservative_update(q, un, u, grid, iso, cfg, rh,
                                              vp, vm, state,
                                              predictor=state.predictor)
    diag = StepDiagnostics(sweeps_used=sweeps, newton_iters_total=iters + extra,
                           flux_left=float(tau * phi[0]),
                           flux_right=float(tau * phi[-1]),
                           edge_flux=phi,
                           wall_time=time.perf_counter() - t_start,
                           limiter=state)
    return uf, qn, diag


_STEPPERS = {
    "explicit1": step_explicit1,
    "explicit2": step_explicit2,
    "implicit1": step_implicit1,
    "compact2": step_compact2,
    "hires_weno": step_hires_weno,
}


def run_1d(problem: Problem1D, u0: np.ndarray, cfg: SchemeConfig,
           t_final: float, n_steps: int,
           step_hook: Optional[Callable] = None) -> RunResult:
    """Advance the initial cell averages u0 to t_final in n_steps steps.

    step_hook(step_index, t_new, u, q, diag), if given, is called after
    every step with the padded state arrays; it may read but must not
    modify them.
    """
    grid, iso = problem.grid, problem.isotherm
    u0 = np.asarray(u0, dtype=np.float64)
    if u0.shape != (grid.m,):
        raise ValueError(f"u0 must have shape ({grid.m},), got {u0.shape}")
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    vp, vm = edge_split_1d(grid, problem.velocity)
    step_fn = _STEPPERS[cfg.scheme]

    u = np.zeros(grid.ntot)
    u[grid.interior] = u0
    fill_ghosts_1d(u, grid, problem.bc_left, problem.bc_right, problem.t0)
    q = np.asarray(iso.F(u))

    h = grid.h
    mass_initial = h * float(np.sum(q[grid.interior]))
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
        try:
            u, q, diag = step_fn(u, q, vp, vm, tau, t, problem, cfg)
        except InstabilityError as err:
            err.step = n
            raise
        t = problem.t0 + (n + 1) * tau
        sweeps_total += diag.sweeps_used
        sweeps_max = max(sweeps_max, diag.sweeps_used)
        newton_total += diag.newton_iters_total
        step_flux = diag.flux_left - diag.flux_right
        flux_net += step_flux
        mass = h * float(np.sum(q[grid.interior]))
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
