#!/usr/bin/env python3
"""Start the operator bridge with a sensible live-demo config.

Pair it with the browser console in frontend/ (npm run dev there, or open
the built bundle) and steer the mirrored room by keyboard.

Usage: python3 scripts/demo_serve.py [--port 8765] [--case 2|3] [--scenario N]
"""
import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from atsim.bridge import serve_bridge
from atsim.supervisor import CaseConfig


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--port", type=int, default=8765)
    ap.add_argument("--case", type=int, default=2)
    ap.add_argument("--scenario", type=int, default=2)
    ap.add_argument("--timeout", type=float, default=600.0)
    args = ap.parse_args()
    cfg = CaseConfig(case_id=args.case, scenario_id=args.scenario,
                     teleop_source="console", trial_timeout=args.timeout)
    return serve_bridge(cfg, args.port)


if __name__ == "__main__":
    sys.exit(main())
