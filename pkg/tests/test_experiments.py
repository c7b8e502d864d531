"""Experiment presets, recorded targets, and the ladder runner."""

from __future__ import annotations

import numpy as np
import pytest

from sorptran import ConfigError, Grid1D, Grid2D, eoc, l1_error, run_preset
from sorptran.experiments import (PRESETS, TARGETS, ConvergenceRow, Preset,
                                  Target, Variant)
from sorptran import csvio

EXPECTED_PRESETS = {
    "table1-smooth", "table2-largecourant", "table3-step", "table4-step",
    "table5-step", "fig4-blowup", "cos-velocity", "rotation2d",
}


def test_registry_contents():
    assert set(PRESETS) == EXPECTED_PRESETS
    for name, preset in PRESETS.items():
        assert preset.name == name
        assert preset.variants
        assert preset.ladders


def test_recorded_targets_attach_to_existing_variants():
    valid = {(name, v.block, v.scheme, v.p)
             for name, preset in PRESETS.items() for v in preset.variants}
    assert set(TARGETS) <= valid
    for (name, block, _, _), target in TARGETS.items():
        ladder = PRESETS[name].ladders[block]
        assert len(target.errors) == len(ladder)
        assert len(target.eocs) == len(ladder) - 1


def test_variant_labels():
    assert Variant("implicit1", 0.5).label() == "implicit1_p0.5"
    assert Variant("hires_weno", 0.25, block="c1").label() \
        == "hires_weno_p0.25_c1"


def _preset_kwargs(**overrides):
    kwargs = dict(name="tmp", description="", dimension=1,
                  x_left=0.0, x_right=1.0, t0=0.0, t_final=1.0,
                  ladders={"": ((320, 16), (640, 32))},
                  variants=(Variant("implicit1", 0.5),),
                  ic="step", velocity="constant", reference="none")
    kwargs.update(overrides)
    return kwargs


def test_preset_rejects_non_doubling_ladder():
    with pytest.raises(ConfigError) as err:
        Preset(**_preset_kwargs(ladders={"": ((320, 16), (500, 25))}))
    assert "double" in err.value.violations[0]


def test_preset_rejects_unknown_ladder_block():
    with pytest.raises(ConfigError) as err:
        Preset(**_preset_kwargs(
            variants=(Variant("implicit1", 0.5, block="missing"),)))
    assert "missing" in err.value.violations[0]


def _row(index, error, order=np.nan):
    return ConvergenceRow(m=320 * 2 ** index, n=16, error=error, eoc=order,
                          cpu_seconds=0.1, c_max=1.0)


def test_target_checks_error_band():
    target = Target(errors=(1e-3, 5e-4), eocs=(1.0,))
    assert target.check_row(0, _row(0, 2.9e-3)) == []
    assert target.check_row(0, _row(0, 3.1e-3))
    assert target.check_row(0, _row(0, 1e-3 / 3.2))
    assert target.check_row(0, _row(0, np.nan))


def test_target_checks_order_band():
    target = Target(errors=(1e-3, 5e-4), eocs=(1.0,))
    assert target.check_row(1, _row(1, 5e-4, order=1.2)) == []
    assert target.check_row(1, _row(1, 5e-4, order=1.3))


def test_target_final_order_threshold():
    target = Target(errors=(1e-3, 3e-4, 6e-5), eocs=(1.7, 2.3),
                    eoc_final_min=1.8)
    # intermediate rungs only face the error band when the final-order
    # threshold is active
    assert target.check_row(1, _row(1, 3e-4, order=3.0)) == []
    assert target.check_row(2, _row(2, 6e-5, order=1.75))
    assert target.check_row(2, _row(2, 6e-5, order=1.95)) == []


def test_l1_error_measures_area():
    grid = Grid1D(0.0, 2.0, 10)
    u = np.full(10, 0.35)
    assert l1_error(u, np.zeros(10), grid) == pytest.approx(0.7)
    grid2 = Grid2D(0.0, 1.0, 5)
    assert l1_error(np.full((5, 5), 1.0), np.zeros((5, 5)), grid2) \
        == pytest.approx(1.0)
    with pytest.raises(ValueError):
        l1_error(u, np.zeros(9), grid)


def test_eoc_is_a_log2_ratio():
    assert eoc(4e-3, 1e-3) == pytest.approx(2.0)
    assert eoc(1e-3, 1e-3) == pytest.approx(0.0)
    assert np.isnan(eoc(np.nan, 1e-3))
    assert np.isnan(eoc(0.0, 1e-3))


def test_run_preset_rejects_unknown_name():
    with pytest.raises(ConfigError):
        run_preset("table9-missing")


def test_run_preset_smoke_with_artifacts(tmp_path):
    seen = []
    result = run_preset("table2-largecourant", out_dir=tmp_path,
                        max_rungs=1, progress=seen.append)
    assert result.ok
    assert seen and all("M=320" in line for line in seen)
    assert all(case.status == "ok"
               for vr in result.variants for case in vr.cases)

    for vr in result.variants:
        label = vr.variant.label()
        conv = tmp_path / f"{label}_convergence.csv"
        assert conv.exists()
        data = csvio.read_convergence_csv(conv)
        assert data["M"][0] == 320
        assert data["E"][0] == pytest.approx(vr.cases[0].error, rel=1e-12)
        assert (tmp_path / f"{label}_M320_profile.csv").exists()
    assert (tmp_path / "reference_p0.25_M320.csv").exists()
    assert all(path.exists() for path in result.artifacts)

    lines = result.report_lines()
    assert len(lines) == len(result.variants)
    assert all("[ok]" in line and "E=" in line for line in lines)


def test_run_preset_parallel_drops_timing():
    result = run_preset("fig4-blowup", sequential=False)
    assert result.ok
    statuses = {vr.variant.scheme: [c.status for c in vr.cases]
                for vr in result.variants}
    assert statuses["explicit1"] == ["unstable"]
    assert statuses["explicit2"] == ["unstable"]
    assert statuses["implicit1"] == ["ok"]
    assert statuses["hires_weno"] == ["ok"]
    for vr in result.variants:
        assert all(np.isnan(c.cpu_seconds) for c in vr.cases)
    assert any("unstable as expected" in line
               for line in result.report_lines())
