"""Command line front end.

Three subcommands, one per figure kind: ``profiles`` renders 1D solution
panels, ``cpu-error`` renders cost-versus-accuracy curves, ``contours``
renders 2D field panels. Inputs are labeled CSV artifacts given as
repeatable ``--series label=path`` options. Exit codes: 0 on success, 1
when arguments or input files are invalid.
"""

from __future__ import annotations

import argparse
import pathlib
import sys

from .csvin import PlotInputError
from .figures import (FigureSpec, Series, plot_contours, plot_cpu_vs_error,
                      plot_profiles)


def _series(text: str, role: str = "numerical") -> Series:
    label, sep, path = text.partition("=")
    if not sep or not label or not path:
        raise PlotInputError(f"expected label=path, got {text!r}")
    return Series(path=pathlib.Path(path), label=label, role=role)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sorptran-plots",
        description="figure generation from solver CSV artifacts")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--series", action="append", required=True,
                       metavar="LABEL=PATH", help="labeled input CSV")
        p.add_argument("--out", required=True, type=pathlib.Path,
                       help="output image path")
        p.add_argument("--title", default="")

    p = sub.add_parser("profiles", help="1D solution panels")
    common(p)
    p.add_argument("--exact", type=pathlib.Path,
                   help="reference profile overlay")
    p.add_argument("--ic", type=pathlib.Path,
                   help="initial profile overlay")
    p.add_argument("--panels", default="qu", choices=("qu", "uq", "u", "q"),
                   help="which variables, left to right")
    p.add_argument("--scale", default="linear", choices=("linear", "loglog"))

    p = sub.add_parser("cpu-error", help="cost versus accuracy curves")
    common(p)
    p.add_argument("--scale", default="loglog", choices=("linear", "loglog"))

    p = sub.add_parser("contours", help="2D field panels")
    common(p)
    p.add_argument("--ncols", type=int, default=3)
    return parser


def _cmd_profiles(args) -> int:
    inputs = [_series(s) for s in args.series]
    if args.exact is not None:
        inputs.append(Series(path=args.exact, label="exact", role="exact"))
    if args.ic is not None:
        inputs.append(Series(path=args.ic, label="initial", role="ic"))
    out = plot_profiles(FigureSpec(inputs=tuple(inputs), out_path=args.out,
                                   panels=args.panels, scale=args.scale,
                                   title=args.title))
    print(f"wrote {out}")
    return 0


def _cmd_cpu_error(args) -> int:
    out = plot_cpu_vs_error(FigureSpec(
        inputs=tuple(_series(s) for s in args.series),
        out_path=args.out, scale=args.scale, title=args.title))
    print(f"wrote {out}")
    return 0


def _cmd_contours(args) -> int:
    out = plot_contours(FigureSpec(
        inputs=tuple(_series(s) for s in args.series),
        out_path=args.out, ncols=args.ncols, title=args.title))
    print(f"wrote {out}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        if args.command == "profiles":
            return _cmd_profiles(args)
        if args.command == "cpu-error":
            return _cmd_cpu_error(args)
        return _cmd_contours(args)
    except PlotInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
