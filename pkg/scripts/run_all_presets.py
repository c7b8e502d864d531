"""Run every recorded study end to end and collect the artifacts.

The full pass reproduces all convergence ladders sequentially, so budget
around twenty minutes. Use --max-rungs 1 for a smoke pass or --only to
pick single studies.
"""

from __future__ import annotations

import argparse
import pathlib
import sys
import time

from sorptran.experiments import PRESETS, run_preset


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=pathlib.Path,
                    default=pathlib.Path("artifacts"))
    ap.add_argument("--only", action="append", metavar="NAME",
                    help="run just this preset (repeatable)")
    ap.add_argument("--max-rungs", type=int, default=None)
    ap.add_argument("--parallel", action="store_true",
                    help="run rungs concurrently, drop timings")
    args = ap.parse_args(argv)

    names = args.only if args.only else sorted(PRESETS)
    unknown = [n for n in names if n not in PRESETS]
    if unknown:
        ap.error(f"unknown preset(s): {', '.join(unknown)}")

    failures = 0
    for name in names:
        t0 = time.perf_counter()
        result = run_preset(name, out_dir=args.out / name,
                            sequential=not args.parallel,
                            max_rungs=args.max_rungs,
                            progress=lambda line: print("  " + line))
        wall = time.perf_counter() - t0
        verdict = "ok" if result.ok else "FAILED"
        print(f"{name}: {verdict} ({wall:.0f}s, "
              f"{len(result.artifacts)} files)")
        for line in result.report_lines():
            print("  " + line)
        failures += 0 if result.ok else 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
