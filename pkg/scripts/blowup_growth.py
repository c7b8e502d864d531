"""Record per-step solution growth of explicit vs implicit stepping.

At Courant number 2 the explicit first-order scheme amplifies the step
problem until the overflow guard trips, while the implicit scheme stays
inside [0, 1]. This script logs max|u| after every step for both and
writes growth.csv with columns step, t, explicit1, implicit1 (the
explicit column goes empty once the run has aborted).
"""

from __future__ import annotations

import argparse
import csv
import math
import pathlib
import sys

import numpy as np

from sorptran import (DirichletBC, Grid1D, InstabilityError, IsothermSpec,
                      Problem1D, SchemeConfig, run_1d)
from sorptran.experiments import ic_step_1d
from sorptran.velocity import ConstantVelocity


def growth(scheme: str, m: int, n_steps: int, t_final: float):
    grid = Grid1D(0.0, 5.0, m)
    problem = Problem1D(grid, IsothermSpec(a=1.0, p=0.5),
                        ConstantVelocity(1.0),
                        DirichletBC(0.0), DirichletBC(0.0))
    peaks: list[float] = []

    def hook(step, t, u, q, diag):
        peaks.append(float(np.max(np.abs(u[grid.interior]))))

    try:
        run_1d(problem, ic_step_1d(grid), SchemeConfig(scheme=scheme),
               t_final, n_steps, step_hook=hook)
        note = "completed"
    except InstabilityError as err:
        note = f"aborted at step {err.step}, max|q| = {err.max_abs:.3g}"
    return peaks, note


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=pathlib.Path, default=pathlib.Path("."))
    ap.add_argument("--m", type=int, default=320)
    ap.add_argument("--steps", type=int, default=96)
    ap.add_argument("--t-final", type=float, default=3.0)
    args = ap.parse_args(argv)

    tau = args.t_final / args.steps
    columns = {}
    for scheme in ("explicit1", "implicit1"):
        peaks, note = growth(scheme, args.m, args.steps, args.t_final)
        columns[scheme] = peaks
        print(f"{scheme}: {note}")

    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / "growth.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("step", "t", "explicit1", "implicit1"))
        for k in range(args.steps):
            exp_peak = columns["explicit1"][k] \
                if k < len(columns["explicit1"]) else math.nan
            w.writerow((k + 1, (k + 1) * tau,
                        "" if math.isnan(exp_peak) else repr(exp_peak),
                        repr(columns["implicit1"][k])))
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
