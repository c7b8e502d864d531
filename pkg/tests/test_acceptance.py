"""End-to-end acceptance checks, one test per headline property.

Each test states a quantitative gate: convergence orders and error
magnitudes of the recorded studies, blow-up vs robustness at large Courant
numbers, discrete conservation, degeneration and oracle identities, front
placement against the exact profile, cost parity, and the range property
of the limited reconstruction. The preset runs are shared through the
session cache, so the whole file costs little more than one pass over the
experiment ladders.
"""

from __future__ import annotations

import numpy as np
import pytest

from sorptran import (DirichletBC, Grid1D, Grid2D, InstabilityError,
                      IsothermSpec, Problem1D, Problem2D, SchemeConfig,
                      StepRiemannSolution, fine_grid_oracle, kernels, run_1d,
                      run_2d)
from sorptran.experiments import PRESETS, TARGETS, ic_gauss4_1d, ic_step_1d
from sorptran.schemes_1d import step_compact2, step_hires_weno, step_implicit1
from sorptran.schemes_2d import step_hires_weno_2d, step_implicit1_2d
from sorptran.stepping import fill_ghosts_1d
from sorptran.velocity import (ConstantVelocity, CosineVelocity,
                               RotationVelocity, edge_split_1d, edge_split_2d)

from oracles import implicit_first_order_step

NEWTON_ABS_TOL = 1e-12

STEP_PRESETS = ("table3-step", "table4-step", "table5-step")


def _variant(result, scheme, p, block=""):
    for vr in result.variants:
        v = vr.variant
        if (v.scheme, v.p, v.block) == (scheme, p, block):
            return vr
    raise AssertionError(f"{scheme} p={p} block={block!r} not in "
                         f"{result.preset.name}")


def _orders(vr):
    return [row.eoc for row in vr.rows[1:]]


# ---------------------------------------------------------------------------
# A1: smooth-problem convergence orders and error magnitudes


def test_a1_smooth_convergence_orders_and_errors(presets):
    result, elapsed = presets.get("table1-smooth")
    assert result.ok, "\n".join(
        line for vr in result.variants
        for line in vr.failures())

    for block in ("c0.5", "c1"):
        for scheme in ("explicit1", "implicit1"):
            orders = _orders(_variant(result, scheme, 0.5, block))
            assert all(abs(e - 0.99) <= 0.1 for e in orders), \
                f"{scheme} {block}: first order EOCs {orders}"
        orders = _orders(_variant(result, "compact2", 0.5, block))
        assert all(1.85 <= e <= 2.05 for e in orders), \
            f"compact2 {block}: EOCs {orders}"
        # recorded error magnitudes, within a factor of three per rung
        for scheme in ("explicit1", "implicit1", "compact2"):
            vr = _variant(result, scheme, 0.5, block)
            target = TARGETS[("table1-smooth", block, scheme, 0.5)]
            for row, ref in zip(vr.rows, target.errors):
                assert 1.0 / 3.0 <= row.error / ref <= 3.0, \
                    f"{scheme} {block} M={row.m}: E={row.error:.3g} " \
                    f"vs {ref:.3g}"

    assert elapsed <= 300.0, f"ladder took {elapsed:.0f}s"
    print(f"A1 ok: orders and error magnitudes match, {elapsed:.0f}s")


# ---------------------------------------------------------------------------
# A2: implicit convergence at Courant number 20


def test_a2_large_courant_convergence(presets):
    result, elapsed = presets.get("table2-largecourant")
    assert result.ok, "\n".join(
        line for vr in result.variants for line in vr.failures())

    for p in (0.25, 0.5, 0.75):
        orders = _orders(_variant(result, "implicit1", p))
        assert all(0.95 <= e <= 1.05 for e in orders), \
            f"implicit1 p={p}: EOCs {orders}"
    for p in (0.25, 0.5):
        orders = _orders(_variant(result, "compact2", p))
        assert all(e >= 1.85 for e in orders), f"compact2 p={p}: {orders}"
    assert _orders(_variant(result, "compact2", 0.75))[-1] >= 1.8
    for p in (0.25, 0.5, 0.75):
        assert _orders(_variant(result, "hires_weno", p))[-1] >= 1.8, \
            f"hires p={p}"

    assert elapsed <= 300.0, f"ladder took {elapsed:.0f}s"
    print(f"A2 ok: large-Courant orders hold, {elapsed:.0f}s")


# ---------------------------------------------------------------------------
# A3: step-problem convergence across all nine exponents


def test_a3_step_problem_convergence(presets):
    total = 0.0
    for name in STEP_PRESETS:
        result, elapsed = presets.get(name)
        total += elapsed
        assert result.ok, "\n".join(
            line for vr in result.variants for line in vr.failures())
        for p in sorted({v.variant.p for v in result.variants}):
            first = _variant(result, "implicit1", p)
            recorded = TARGETS[(name, "", "implicit1", p)].eocs
            for e, ref in zip(_orders(first), recorded):
                assert abs(e - ref) <= 0.15, \
                    f"{name} implicit1 p={p}: EOC {e:.2f} vs {ref}"
            hires = _variant(result, "hires_weno", p)
            assert _orders(hires)[-1] >= 0.9, f"{name} hires p={p}"
            assert hires.rows[-1].error < first.rows[-1].error, \
                f"{name} p={p}: hires not below first order at M=2560"
    assert total <= 900.0, f"step ladders took {total:.0f}s"
    print(f"A3 ok: nine-exponent step study holds, {total:.0f}s")


# ---------------------------------------------------------------------------
# A4: explicit blow-up vs implicit robustness at Courant number 2


def test_a4_blowup_vs_unconditional_stability(presets):
    result, _ = presets.get("fig4-blowup")
    preset = PRESETS["fig4-blowup"]
    (m, n), = preset.ladders[""]
    grid = Grid1D(preset.x_left, preset.x_right, m)
    problem = Problem1D(grid, IsothermSpec(a=1.0, p=0.5),
                        ConstantVelocity(1.0),
                        DirichletBC(0.0), DirichletBC(0.0))

    for scheme in ("explicit1", "explicit2"):
        assert _variant(result, scheme, 0.5).cases[0].status == "unstable"
        with pytest.raises(InstabilityError) as err:
            run_1d(problem, ic_step_1d(grid), SchemeConfig(scheme=scheme),
                   preset.t_final, n)
        blown = err.value.max_abs
        assert blown is not None
        assert not np.isfinite(blown) or blown > 10.0

    for scheme in ("implicit1", "hires_weno"):
        case = _variant(result, scheme, 0.5).cases[0]
        assert case.status == "ok"
        assert case.run.u_min_seen >= -1e-3
        assert case.run.u_max_seen <= 1.0 + 1e-3
    print("A4 ok: explicit runs blow up, implicit runs stay in [0, 1]")


# ---------------------------------------------------------------------------
# A5: discrete mass conservation on every preset


def test_a5_mass_conservation_everywhere(presets):
    checked = 0
    for name, preset in sorted(PRESETS.items()):
        result, _ = presets.get(name)
        per_step_tol = 10.0 * NEWTON_ABS_TOL
        for vr in result.variants:
            for case in vr.cases:
                if case.status != "ok":
                    continue
                run = case.run
                cells = case.m ** preset.dimension
                assert run.conservation_defect_max <= cells * per_step_tol, \
                    f"{name} {vr.variant.label()} M={case.m}: defect " \
                    f"{run.conservation_defect_max:.3e}"
                drift = abs(run.mass_final - run.mass_initial
                            - run.boundary_flux_net)
                assert drift <= 1e-7 * abs(run.mass_initial), \
                    f"{name} {vr.variant.label()} M={case.m}: drift {drift:.3e}"
                checked += 1
    assert checked > 50
    print(f"A5 ok: mass ledger closes on {checked} runs")


# ---------------------------------------------------------------------------
# A6: limiter off reproduces the first-order scheme


def test_a6_degeneration_to_first_order():
    grid = Grid1D(-4.0, 11.0, 64)
    x = grid.cell_centers()
    width = grid.x_right - grid.x_left
    vp, vm = edge_split_1d(grid, CosineVelocity(1.0))
    tau = 0.1
    worst = 0.0
    for seed in range(5):
        rng = np.random.default_rng(seed)
        u0 = np.full(grid.m, 0.4)
        for k in range(1, 5):
            u0 += rng.uniform(0.0, 0.08) * np.sin(
                2.0 * np.pi * k * (x - grid.x_left) / width
                + rng.uniform(0.0, 7.0))
        problem = Problem1D(grid, IsothermSpec(a=1.0,
                                               p=float(rng.uniform(0.2, 3.0))),
                            CosineVelocity(1.0),
                            DirichletBC(0.0), DirichletBC(0.0))
        cfg = SchemeConfig()

        def prepare():
            u = np.zeros(grid.ntot)
            u[grid.interior] = u0
            return u, np.asarray(problem.isotherm.F(u))

        u, q = prepare()
        base, _, _ = step_implicit1(u, q, vp, vm, tau, 0.0, problem, cfg)
        for stepper in (step_compact2, step_hires_weno):
            u, q = prepare()
            same, _, _ = stepper(u, q, vp, vm, tau, 0.0, problem, cfg,
                                 limiter_override=0.0)
            worst = max(worst, float(np.max(np.abs(same - base))))
    assert worst <= 1e-13, f"worst 1D deviation {worst:.3e}"

    # same identity for the 2D pair
    grid2 = Grid2D(-1.0, 1.0, 24)
    c = grid2.cell_centers()
    xg, yg = np.meshgrid(c, c, indexing="ij")
    u0 = 0.4 + 0.2 * np.sin(np.pi * xg) * np.cos(np.pi * yg)
    problem2 = Problem2D(grid2, IsothermSpec(a=1.0, p=0.5),
                         RotationVelocity(), DirichletBC(0.0))
    splits = edge_split_2d(grid2, problem2.velocity)

    def prepare2():
        u = np.zeros((grid2.ntot, grid2.ntot))
        u[grid2.interior] = u0
        return u, np.asarray(problem2.isotherm.F(u))

    u, q = prepare2()
    base, _, _ = step_implicit1_2d(u, q, splits, 0.02, 0.0, problem2,
                                   SchemeConfig())
    u, q = prepare2()
    same, _, _ = step_hires_weno_2d(u, q, splits, 0.02, 0.0, problem2,
                                    SchemeConfig(), limiter_override=0.0)
    worst2 = float(np.max(np.abs(same - base)))
    assert worst2 <= 1e-13, f"worst 2D deviation {worst2:.3e}"
    print(f"A6 ok: worst deviations {worst:.2e} (1D), {worst2:.2e} (2D)")


# ---------------------------------------------------------------------------
# A7: fast sweeping equals a monolithic solve of the implicit system


def test_a7_fast_sweeping_matches_monolithic_solve():
    grid = Grid1D(-4.0, 11.0, 160)
    tau = 0.75     # the step length of the cosine study at this resolution
    worst = 0.0
    for p in (0.25, 4.0):
        problem = Problem1D(grid, IsothermSpec(a=1.0, p=p),
                            CosineVelocity(1.0),
                            DirichletBC(0.0), DirichletBC(0.0))
        u0 = ic_gauss4_1d(grid)
        run = run_1d(problem, u0,
                     SchemeConfig(scheme="implicit1", sweep_tol=1e-12),
                     tau, 1)
        padded = np.zeros(grid.ntot)
        padded[grid.interior] = u0
        reference = implicit_first_order_step(problem, padded, tau, 0.0)
        worst = max(worst, float(np.max(
            np.abs(run.interior_u - reference[grid.interior]))))
    assert worst <= 1e-8, f"worst deviation {worst:.3e}"
    print(f"A7 ok: swept vs monolithic solve agree to {worst:.2e}")


# ---------------------------------------------------------------------------
# A8: front position and rarefaction profile against the refined reference


def test_a8_exact_solution_against_fine_grid_reference():
    t_final = 3.0
    m, n = 320, 32
    for p in (0.25, 0.5, 2.0, 3.0):
        iso = IsothermSpec(a=1.0, p=p)
        sol = StepRiemannSolution(iso)
        grid = Grid1D(0.0, 5.0, m)
        h = grid.h
        problem = Problem1D(grid, iso, ConstantVelocity(1.0),
                            DirichletBC(0.0), DirichletBC(0.0))
        oracle = fine_grid_oracle(problem, ic_step_1d,
                                  SchemeConfig(scheme="hires_weno"),
                                  t_final, n, refine=4)

        # sharpest jump of the reference vs the exact shock position
        front_ref = grid.edges()[1:-1][int(np.argmax(np.abs(np.diff(oracle))))]
        front_exact = (1.0 if p < 1.0 else 0.0) + t_final * sol.shock_speed
        assert abs(front_ref - front_exact) <= 2.0 * h, \
            f"p={p}: front {front_ref} vs {front_exact}"

        # pointwise agreement across the fan, two cells off each kink
        b = sol.breakpoints(t_final)
        lo, hi = (b[0], b[1]) if p < 1.0 else (b[1], b[2])
        c = grid.cell_centers()
        fan = (c > lo + 2.0 * h) & (c < hi - 2.0 * h)
        assert np.count_nonzero(fan) > 50
        gap = np.max(np.abs(oracle[fan] - sol.cell_averages(grid, t_final)[fan]))
        assert gap <= 3.0 * h ** 0.8, f"p={p}: fan deviation {gap:.3e}"
    print("A8 ok: fronts within 2h, fans within 3h^0.8")


# ---------------------------------------------------------------------------
# A9: implicit cost at most twice the explicit cost


def test_a9_cpu_parity_implicit_vs_explicit(presets):
    result, _ = presets.get("table1-smooth")
    lines = []
    for block in ("c0.5", "c1"):
        for implicit, explicit in (("implicit1", "explicit1"),
                                   ("compact2", "explicit2")):
            cost_i = _variant(result, implicit, 0.5, block).rows[-1].cpu_seconds
            cost_e = _variant(result, explicit, 0.5, block).rows[-1].cpu_seconds
            assert cost_i <= 2.0 * cost_e, \
                f"{block}: {implicit} {cost_i:.2f}s vs {explicit} {cost_e:.2f}s"
            lines.append(f"{block} {implicit}/{explicit} {cost_i / cost_e:.2f}x")
    print("A9 ok: " + ", ".join(lines))


# ---------------------------------------------------------------------------
# A10: reconstruction envelope and global bounds on the step problems


def _hires_envelope_excess(preset, p, m, n) -> float:
    """Worst distance of any certified interface value from its envelope.

    Re-runs one ladder case with a step hook that rebuilds the limited
    interface values from the recorded weights, limiters and predictor and
    measures them against the four-point stencil envelopes.
    """
    iso = IsothermSpec(a=preset.a, p=p)
    grid = Grid1D(preset.x_left, preset.x_right, m)
    problem = Problem1D(grid, iso, ConstantVelocity(1.0),
                        DirichletBC(0.0), DirichletBC(0.0))
    g, mm = grid.ghost, grid.m
    tau = (preset.t_final - preset.t0) / n

    prev = np.zeros(grid.ntot)
    prev[grid.interior] = ic_step_1d(grid)
    fill_ghosts_1d(prev, grid, problem.bc_left, problem.bc_right, preset.t0)
    holder = {"prev": prev, "excess": 0.0}

    def hook(step, t_new, u, q, diag):
        state = diag.limiter
        pred, uold = state.predictor, holder["prev"]
        fill_ghosts_1d(uold, grid, problem.bc_left, problem.bc_right,
                       t_new - tau)
        up = np.zeros(grid.ntot + 1)
        um = np.zeros(grid.ntot + 1)
        kernels.interfaces_limited_1d(pred, uold, state.omega_plus,
                                      state.omega_minus, state.l_plus,
                                      state.l_minus, g, g + mm + 1, up, um)
        val = up[g: g + mm + 1]
        sten = (pred[g - 2: g + mm - 1], pred[g - 1: g + mm],
                uold[g - 1: g + mm], uold[g: g + mm + 1])
        excess = max(float(np.max(np.minimum.reduce(sten) - val)),
                     float(np.max(val - np.maximum.reduce(sten))))
        val = um[g: g + mm + 1]
        sten = (pred[g + 1: g + mm + 2], pred[g: g + mm + 1],
                uold[g: g + mm + 1], uold[g - 1: g + mm])
        excess = max(excess,
                     float(np.max(np.minimum.reduce(sten) - val)),
                     float(np.max(val - np.maximum.reduce(sten))))
        holder["excess"] = max(holder["excess"], excess)
        holder["prev"] = u.copy()

    run_1d(problem, ic_step_1d(grid), SchemeConfig(scheme="hires_weno"),
           preset.t_final, n, step_hook=hook)
    return holder["excess"]


def test_a10_interface_envelopes_and_global_bounds(presets):
    # global bounds, every scheme on every discontinuous preset
    for name in STEP_PRESETS + ("fig4-blowup",):
        result, _ = presets.get(name)
        for vr in result.variants:
            for case in vr.cases:
                if case.status != "ok":
                    continue
                label = f"{name} {vr.variant.label()} M={case.m}"
                assert case.run.u_min_seen >= -1e-3, label
                assert case.run.u_max_seen <= 1.0 + 1e-3, label

    # certified interface values, every rung of the limited runs
    worst = 0.0
    for name in STEP_PRESETS:
        preset = PRESETS[name]
        for p in sorted({v.p for v in preset.variants}):
            for m, n in preset.ladders[""]:
                worst = max(worst,
                            _hires_envelope_excess(preset, p, m, n))
    worst = max(worst, _hires_envelope_excess(PRESETS["fig4-blowup"],
                                              0.5, 320, 96))
    assert worst <= 1e-10, f"worst envelope excess {worst:.3e}"
    print(f"A10 ok: bounds hold, worst envelope excess {worst:.2e}")
