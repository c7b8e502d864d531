"""Command line front end.

Four subcommands: ``run`` executes one configured simulation, ``preset``
executes a named experiment ladder, ``list-presets`` prints the known
names, and ``oracle`` writes a refined-grid reference profile for a
configured problem. Exit codes: 0 on success, 1 when a configuration or
argument is invalid, 2 when the solver itself fails.

The output directory is resolved in precedence order: ``--out`` on the
command line, then the SORPTRAN_OUT environment variable, then the
``output.dir`` key of the config file (presets fall back to the preset
name). That environment variable is the only one the package reads.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import kernels
from .config import RunConfigFile, parse_config
from .csvio import (write_convergence_csv, write_grid_csv, write_profile_csv)
from .errors import ConfigError, SorptranError
from .exact import StepRiemannSolution, fine_grid_oracle
from .experiments import PRESETS, l1_error, run_preset
from .schemes_1d import courant_max_1d, run_1d
from .schemes_2d import courant_max_2d, run_2d

ENV_OUT = "SORPTRAN_OUT"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sorptran",
        description="finite volume solver for sorptive transport")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one configured simulation")
    p_run.add_argument("--config", required=True, help="config file path")
    p_run.add_argument("--out", help="output directory override")

    p_pre = sub.add_parser("preset", help="execute a named experiment ladder")
    p_pre.add_argument("name", help="preset name, see list-presets")
    p_pre.add_argument("--out", help="output directory override")
    p_pre.add_argument("--sequential-timing", action="store_true",
                       default=True, dest="sequential",
                       help="run cases one by one so cpu_seconds are "
                            "comparable (the default)")
    p_pre.add_argument("--parallel", action="store_false", dest="sequential",
                       help="run ladder cases concurrently; the "
                            "cpu_seconds column is left empty")

    sub.add_parser("list-presets", help="print the known preset names")

    p_or = sub.add_parser("oracle",
                          help="write a refined-grid reference profile")
    p_or.add_argument("--config", required=True, help="config file path")
    p_or.add_argument("--refine", required=True, type=int,
                      help="grid refinement factor, at least 4")
    p_or.add_argument("--out", help="output directory override")
    return parser


def _resolve_out(cli_out, config_out) -> Path:
    if cli_out:
        return Path(cli_out)
    env = os.environ.get(ENV_OUT)
    if env:
        return Path(env)
    return Path(config_out)


def _load_config(path: str) -> RunConfigFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([f"cannot read config file {path}: {exc}"])
    return parse_config(text)


def _reference_field(cfg: RunConfigFile, problem):
    """Cell-averaged reference on the run grid, or None."""
    if cfg.reference_kind == "exact":
        # constant velocity v rescales the unit-velocity solution in time
        v = dict(cfg.velocity_params)["value"]
        sol = StepRiemannSolution(cfg.isotherm)
        return sol.cell_averages(problem.grid, v * (cfg.t_final - cfg.t0))
    if cfg.reference_kind == "oracle":
        return fine_grid_oracle(problem, cfg.initial_condition, cfg.scheme,
                                cfg.t_final, cfg.n, refine=cfg.oracle_refine)
    return None


def _write_run_artifacts(cfg: RunConfigFile, problem, result, out: Path,
                         reference) -> None:
    out.mkdir(parents=True, exist_ok=True)
    grid = problem.grid
    if "profile" in cfg.output_formats:
        u = result.interior_u
        q = cfg.isotherm.F(np.maximum(u, 0.0))
        c = grid.cell_centers()
        if cfg.dimension == 1:
            write_profile_csv(out / "profile.csv", c, u, q)
        else:
            write_grid_csv(out / "profile.csv", c, c, u, q)
        if reference is not None:
            qr = cfg.isotherm.F(np.maximum(reference, 0.0))
            if cfg.dimension == 1:
                write_profile_csv(out / "reference.csv", c, reference, qr)
            else:
                write_grid_csv(out / "reference.csv", c, c, reference, qr)
    if "convergence" in cfg.output_formats:
        err = (l1_error(result.interior_u, reference, grid)
               if reference is not None else float("nan"))
        if cfg.dimension == 1:
            cmax = courant_max_1d(grid, cfg.velocity(), cfg.tau)
        else:
            cmax = max(courant_max_2d(grid, cfg.velocity(), cfg.tau))
        row = (cfg.m, cfg.n, err, float("nan"), result.wall_time, cmax)
        write_convergence_csv(out / "convergence.csv", [row])


def _cmd_run(args) -> int:
    cfg = _load_config(args.config)
    out = _resolve_out(args.out, cfg.output_dir)
    kernels.warm_up()
    problem = cfg.problem()
    u0 = cfg.initial_condition(problem.grid)
    runner = run_1d if cfg.dimension == 1 else run_2d
    result = runner(problem, u0, cfg.scheme, cfg.t_final, cfg.n)
    reference = _reference_field(cfg, problem)
    _write_run_artifacts(cfg, problem, result, out, reference)
    print(f"{cfg.scheme.scheme} M={cfg.m} N={cfg.n} "
          f"steps={result.steps_taken} wall={result.wall_time:.3f}s "
          f"-> {out}")
    return 0


def _cmd_preset(args) -> int:
    out = _resolve_out(args.out, args.name)
    result = run_preset(args.name, out_dir=out, sequential=args.sequential,
                        progress=lambda line: print(line, flush=True))
    for line in result.report_lines():
        print(line)
    return 0


def _cmd_list_presets() -> int:
    for name in sorted(PRESETS):
        print(f"{name}: {PRESETS[name].description}")
    return 0


def _cmd_oracle(args) -> int:
    cfg = _load_config(args.config)
    if args.refine < 4:
        raise ConfigError([f"--refine must be at least 4, got {args.refine}"])
    out = _resolve_out(args.out, cfg.output_dir)
    kernels.warm_up()
    problem = cfg.problem()
    reference = fine_grid_oracle(problem, cfg.initial_condition, cfg.scheme,
                                 cfg.t_final, cfg.n, refine=args.refine)
    out.mkdir(parents=True, exist_ok=True)
    c = problem.grid.cell_centers()
    qr = cfg.isotherm.F(np.maximum(reference, 0.0))
    if cfg.dimension == 1:
        write_profile_csv(out / "oracle.csv", c, reference, qr)
    else:
        write_grid_csv(out / "oracle.csv", c, c, reference, qr)
    print(f"oracle refine={args.refine} M={cfg.m} -> {out / 'oracle.csv'}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "preset":
            return _cmd_preset(args)
        if args.command == "list-presets":
            return _cmd_list_presets()
        return _cmd_oracle(args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SorptranError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
