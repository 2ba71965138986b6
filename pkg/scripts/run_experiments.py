#!/usr/bin/env python3
"""Full experiment battery: every case on every scenario, the five default
goals on scenario 1, five seeds per cell. Writes the artifact tree under
out/ (or AT_SIM_OUT) and prints the comparison report.

Usage: python3 scripts/run_experiments.py [--jobs N] [--out DIR]
"""
import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from atsim.cli import SweepSpec, run_sweep, _out_root
from atsim.scenarios import DEFAULT_GOALS


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", type=str, default=None)
    args = ap.parse_args()
    out = _out_root(args.out)

    sweeps = [
        # multi-goal accuracy battery on the empty room
        SweepSpec(cases=[0, 1, 2, 3], scenarios=[1],
                  goals=list(DEFAULT_GOALS), seeds=list(range(5))),
        # cluttered, moving, and omni rooms at the near goal
        SweepSpec(cases=[0, 1, 2, 3], scenarios=[2, 3, 4, 5],
                  goals=[(6.0, 0.0)], seeds=list(range(5))),
    ]
    for spec in sweeps:
        sweep_dir = run_sweep(spec, out, jobs=max(1, args.jobs))
        print((sweep_dir / "report.txt").read_text())
        print(f"artifacts: {sweep_dir}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
