"""Configuration file parsing, validation, and normalization."""

from __future__ import annotations

import numpy as np
import pytest

from sorptran import ConfigError, parse_config, serialize_config
from sorptran.stepping import DirichletBC, OutflowBC
from sorptran.velocity import RotationVelocity, TabulatedVelocity

MINIMAL_1D = """\
dimension = 1
domain.x_left = 0.0
domain.x_right = 5.0
grid.M = 100
time.T = 3.0
time.N = 30
isotherm.a = 1.0
isotherm.p = 0.5
scheme.name = hires_weno
velocity.kind = constant
velocity.value = 1.0
ic.kind = step
bc.left = dirichlet:0.0
bc.right = dirichlet:0.0
"""

MINIMAL_2D = """\
dimension = 2
domain.x_left = -1.0
domain.x_right = 1.0
grid.M = 40
time.T = 0.25
time.N = 10
isotherm.a = 1.0
isotherm.p = 0.5
scheme.name = implicit1
velocity.kind = rotation
ic.kind = gauss2d
bc.all = dirichlet:0.0
"""


def _violations(text: str) -> list[str]:
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    return err.value.violations


def test_minimal_1d_config():
    cfg = parse_config(MINIMAL_1D)
    assert cfg.dimension == 1
    assert (cfg.m, cfg.n) == (100, 30)
    assert cfg.tau == pytest.approx(0.1)
    assert cfg.isotherm.p == 0.5
    assert cfg.scheme.scheme == "hires_weno"
    assert cfg.scheme.omega == 0.5          # default filled in
    assert cfg.reference_kind == "none"
    problem = cfg.problem()
    assert problem.grid.m == 100
    assert problem.bc_left == DirichletBC(0.0)
    ic = cfg.initial_condition(problem.grid)
    assert ic.shape == (100,)
    assert set(np.unique(ic)) == {0.0, 1.0}


def test_minimal_2d_config():
    cfg = parse_config(MINIMAL_2D)
    assert cfg.dimension == 2
    assert isinstance(cfg.velocity(), RotationVelocity)
    problem = cfg.problem()
    assert cfg.initial_condition(problem.grid).shape == (40, 40)


def test_comments_and_blank_lines_are_ignored():
    text = "# leading comment\n\n" + MINIMAL_1D + "\n  # trailing\n"
    assert parse_config(text) == parse_config(MINIMAL_1D)


def test_round_trip_normalization():
    cfg = parse_config(MINIMAL_1D)
    text = serialize_config(cfg)
    again = parse_config(text)
    assert again == cfg
    assert serialize_config(again) == text
    # the normalized form spells out the defaults
    assert "scheme.sweep.tol = 1e-10" in text
    assert "time.t0 = 0.0" in text


def test_round_trip_2d():
    cfg = parse_config(MINIMAL_2D)
    assert parse_config(serialize_config(cfg)) == cfg


def test_all_violations_are_collected():
    text = MINIMAL_1D.replace("isotherm.p = 0.5", "isotherm.p = -1.0") \
                     .replace("grid.M = 100", "grid.M = 1")
    text += "no equals sign here\nmystery.key = 3\n"
    found = _violations(text)
    assert len(found) == 4
    assert any("isotherm" in v and "exponent" in v for v in found)
    assert any(v.startswith("grid.M:") for v in found)
    assert any("line 15" in v and "key = value" in v for v in found)
    assert any("line 16" in v and "mystery.key" in v for v in found)


def test_duplicate_keys_report_both_lines():
    text = MINIMAL_1D + "grid.M = 200\n"
    found = _violations(text)
    assert len(found) == 1
    assert "duplicate" in found[0]
    assert "line 15" in found[0] and "line 4" in found[0]


def test_conditional_keys_must_match_their_branch():
    # a constant-velocity parameter under a cosine field is rejected, and
    # the cosine branch then misses its own parameter
    text = MINIMAL_1D.replace("velocity.kind = constant",
                              "velocity.kind = cosine")
    found = _violations(text)
    assert any("velocity.value" in v and "does not apply" in v
               for v in found)
    assert any("missing required key 'velocity.amplitude'" in v
               for v in found)


def test_missing_required_keys_are_reported():
    text = MINIMAL_1D.replace("time.N = 30\n", "")
    found = _violations(text)
    assert found == ["missing required key 'time.N'"]


def test_bc_grammar():
    ok = MINIMAL_1D.replace("bc.right = dirichlet:0.0",
                            "bc.right = outflow")
    cfg = parse_config(ok)
    assert isinstance(cfg.problem().bc_right, OutflowBC)
    bad = MINIMAL_1D.replace("bc.left = dirichlet:0.0", "bc.left = fixed")
    found = _violations(bad)
    assert any("bc.left" in v and "outflow" in v for v in found)
    bad = MINIMAL_1D.replace("bc.left = dirichlet:0.0",
                             "bc.left = dirichlet:abc")
    assert _violations(bad)


def test_tabulated_velocity_lists():
    text = MINIMAL_1D.replace(
        "velocity.kind = constant\nvelocity.value = 1.0",
        "velocity.kind = tabulated\n"
        "velocity.x = 0.0, 2.5, 5.0\n"
        "velocity.v = 1.0, 0.5, 1.0")
    text = text.replace("ic.kind = step", "ic.kind = gauss4")
    cfg = parse_config(text)
    vel = cfg.velocity()
    assert isinstance(vel, TabulatedVelocity)
    assert vel(2.5) == pytest.approx(0.5)
    bad = text.replace("velocity.x = 0.0, 2.5, 5.0",
                       "velocity.x = 0.0, 0.0, 5.0")
    assert any("increasing" in v for v in _violations(bad))


def test_scheme_must_exist_in_the_requested_dimension():
    found = _violations(MINIMAL_2D.replace("scheme.name = implicit1",
                                           "scheme.name = explicit1"))
    assert any("scheme.name" in v and "implicit1" in v for v in found)


def test_exact_reference_needs_the_step_problem():
    ok = MINIMAL_1D + "reference.kind = exact\n"
    assert parse_config(ok).reference_kind == "exact"
    bad = ok.replace("ic.kind = step", "ic.kind = gauss4")
    assert any("exact reference" in v for v in _violations(bad))
    bad = ok.replace("velocity.value = 1.0", "velocity.value = -1.0")
    assert any("positive" in v for v in _violations(bad))
    assert any("exact reference" in v
               for v in _violations(MINIMAL_2D + "reference.kind = exact\n"))


def test_reference_refine_bound():
    text = MINIMAL_1D + "reference.kind = oracle\nreference.refine = 2\n"
    assert any("reference.refine" in v for v in _violations(text))


def test_value_types_are_checked():
    text = MINIMAL_1D.replace("grid.M = 100", "grid.M = many")
    found = _violations(text)
    assert any("expects a int" in v or "expects an int" in v for v in found)


def test_output_formats_are_checked():
    text = MINIMAL_1D + "output.formats = profile, pictures\n"
    assert any("pictures" in v for v in _violations(text))


def test_negative_constant_ic_is_rejected():
    text = MINIMAL_1D.replace("ic.kind = step",
                              "ic.kind = constant\nic.value = -0.5")
    assert any("nonnegative" in v for v in _violations(text))


def test_time_interval_must_be_positive():
    text = MINIMAL_1D.replace("time.T = 3.0", "time.T = 0.0")
    assert any(v.startswith("time.T") for v in _violations(text))
