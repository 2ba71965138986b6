"""Command-line front end.

Subcommands:
  run     one trial; writes metrics JSON and a transcript, exit code encodes
          the outcome (0 reached, 2 timeout, 3 collision, 1 bad config)
  sweep   cross product of cases x scenarios x goals x seeds; writes per-trial
          JSON, aggregate.csv, and report.txt under out/<sweep-id>/
  report  merges trial records (or a ready aggregate.csv) into comparison
          tables plus pass/fail checks
  serve   hosts the live operator bridge for a console-driven trial

The default output root is ./out, overridable with --out or AT_SIM_OUT.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import multiprocessing
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import report as report_mod
from .supervisor import CaseConfig, run_trial, transcript_lines

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_TIMEOUT = 2
EXIT_COLLISION = 3

_OUTCOME_CODES = {"reached": EXIT_OK, "timeout": EXIT_TIMEOUT,
                  "collision": EXIT_COLLISION}


@dataclass
class SweepSpec:
    """Cross product of trial cells; every (case, scenario, goal, seed)
    combination runs once."""
    cases: list[int] = field(default_factory=lambda: [0, 1, 2, 3])
    scenarios: list[int] = field(default_factory=lambda: [1, 2, 3])
    goals: list[tuple[float, float]] = field(default_factory=lambda: [(6.0, 0.0)])
    seeds: list[int] = field(default_factory=list)
    trials_per_cell: int = 5
    base: dict = field(default_factory=dict)  # shared CaseConfig overrides

    def __post_init__(self):
        if not self.seeds:
            self.seeds = list(range(self.trials_per_cell))
        else:
            self.trials_per_cell = len(self.seeds)

    def validate(self) -> None:
        if not self.cases or not set(self.cases) <= {0, 1, 2, 3}:
            raise ValueError(f"cases must be a non-empty subset of 0..3, got {self.cases}")
        if not self.scenarios or not set(self.scenarios) <= {1, 2, 3, 4, 5}:
            raise ValueError(f"scenarios must be a non-empty subset of 1..5, got {self.scenarios}")
        if not self.goals:
            raise ValueError("goals must be non-empty")
        if self.trials_per_cell < 1:
            raise ValueError("trials_per_cell must be >= 1")

    def to_dict(self) -> dict:
        return {"cases": list(self.cases), "scenarios": list(self.scenarios),
                "goals": [[g[0], g[1]] for g in self.goals],
                "seeds": list(self.seeds),
                "trials_per_cell": self.trials_per_cell, "base": self.base}

    @property
    def sweep_id(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:12]

    def configs(self) -> list[CaseConfig]:
        out = []
        for case in self.cases:
            for sc in self.scenarios:
                for goal in self.goals:
                    for seed in self.seeds:
                        d = dict(self.base)
                        d.update(case_id=case, scenario_id=sc,
                                 goal=list(goal), seed=seed)
                        out.append(CaseConfig.from_dict(d))
        return out


def _trial_worker(cfg_dict: dict) -> dict:
    metrics, _ = run_trial(CaseConfig.from_dict(cfg_dict))
    return metrics.to_dict()


def run_sweep(spec: SweepSpec, out_root: Path, jobs: int = 1) -> Path:
    """Execute the sweep, write its artifact tree, return the sweep dir."""
    spec.validate()
    sweep_dir = Path(out_root) / spec.sweep_id
    sweep_dir.mkdir(parents=True, exist_ok=True)
    (sweep_dir / "spec.json").write_text(
        json.dumps(spec.to_dict(), indent=1, sort_keys=True) + "\n")
    cfgs = spec.configs()
    cfg_dicts = [c.to_dict() for c in cfgs]
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            records = pool.map(_trial_worker, cfg_dicts)
    else:
        records = [_trial_worker(d) for d in cfg_dicts]
    goal_index = {tuple(g): i for i, g in enumerate(spec.goals)}
    for rec in records:
        gi = goal_index[tuple(rec["goal"])]
        name = f"{rec['case_id']}-{rec['scenario_id']}-g{gi}-{rec['seed']}.json"
        (sweep_dir / name).write_text(
            json.dumps(rec, separators=(",", ":")) + "\n")
    rows = report_mod.aggregate([report_mod.flatten_record(r) for r in records])
    report_mod.write_aggregate_csv(sweep_dir / "aggregate.csv", rows)
    flags = report_mod.acceptance_flags(rows)
    (sweep_dir / "report.txt").write_text(
        report_mod.render_tables(rows) + "\n" + report_mod.render_flags(flags))
    return sweep_dir


# ---- flag plumbing ---------------------------------------------------------

def _parse_goal(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"goal must be 'x,y', got {text!r}")
    return (float(parts[0]), float(parts[1]))


def _parse_int_list(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p != ""]


def _parse_goal_list(text: str) -> list[tuple[float, float]]:
    return [_parse_goal(p) for p in text.split(";") if p != ""]


def _out_root(arg: str | None) -> Path:
    if arg:
        return Path(arg)
    env = os.environ.get("AT_SIM_OUT")
    return Path(env) if env else Path("out")


def _load_base(args) -> dict:
    if getattr(args, "config", None):
        with open(args.config) as f:
            base = json.load(f)
        if not isinstance(base, dict):
            raise ValueError("config file must hold a JSON object")
        return base
    return {}


def _overrides(args) -> dict:
    d: dict = {}
    if args.case is not None:
        d["case_id"] = int(args.case)
    if args.scenario is not None:
        d["scenario_id"] = int(args.scenario)
    if args.goal is not None:
        d["goal"] = list(_parse_goal(args.goal))
    if args.seed is not None:
        d["seed"] = int(args.seed)
    if args.timeout is not None:
        d["trial_timeout"] = args.timeout
    return d


def _single_config(args) -> CaseConfig:
    d = _load_base(args)
    d.update(_overrides(args))
    cfg = CaseConfig.from_dict(d)
    cfg.validate()
    return cfg


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="atsim", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, single_seed: bool):
        sp.add_argument("--case", type=str, default=None)
        sp.add_argument("--scenario", type=str, default=None)
        sp.add_argument("--goal", type=str, default=None,
                        help="x,y" if single_seed else "x,y;x,y;...")
        sp.add_argument("--seed", type=str, default=None)
        sp.add_argument("--config", type=str, default=None,
                        help="JSON file with trial config defaults")
        sp.add_argument("--out", type=str, default=None)
        sp.add_argument("--timeout", type=float, default=None,
                        help="trial timeout, virtual seconds")

    sp = sub.add_parser("run", help="run one trial")
    common(sp, True)
    sp = sub.add_parser("sweep", help="run a case/scenario/goal/seed cross product")
    common(sp, False)
    sp.add_argument("--trials", type=int, default=5,
                    help="seeds per cell when --seed is not given")
    sp.add_argument("--jobs", type=int, default=1, help="parallel trial workers")
    sp = sub.add_parser("report", help="tables and checks from trial records")
    sp.add_argument("inputs", nargs="+",
                    help="sweep dirs, trial JSON files, or one aggregate.csv")
    sp = sub.add_parser("serve", help="host the operator bridge")
    common(sp, True)
    sp.add_argument("--port", type=int, default=8765)
    return p


# ---- subcommands -----------------------------------------------------------

def cmd_run(args) -> int:
    cfg = _single_config(args)
    out = _out_root(args.out) / "run"
    out.mkdir(parents=True, exist_ok=True)
    metrics, transcript = run_trial(cfg)
    stem = f"{cfg.case_id}-{cfg.scenario_id}-{cfg.seed}"
    (out / f"{stem}.json").write_text(
        json.dumps(metrics.to_dict(), separators=(",", ":")) + "\n")
    (out / f"{stem}.transcript.jsonl").write_text(
        "\n".join(transcript_lines(transcript)) + "\n")
    print(f"{metrics.end_reason}: goal_error={metrics.goal_error_m:.3f} m "
          f"duration={metrics.duration_s:.1f} s -> {out / (stem + '.json')}")
    return _OUTCOME_CODES[metrics.end_reason]


def cmd_sweep(args) -> int:
    base = _load_base(args)
    if args.timeout is not None:
        base["trial_timeout"] = args.timeout
    spec = SweepSpec(
        cases=_parse_int_list(args.case) if args.case else [0, 1, 2, 3],
        scenarios=_parse_int_list(args.scenario) if args.scenario else [1, 2, 3],
        goals=_parse_goal_list(args.goal) if args.goal else [(6.0, 0.0)],
        seeds=_parse_int_list(args.seed) if args.seed else [],
        trials_per_cell=args.trials,
        base=base)
    spec.validate()
    for cfg in spec.configs()[:1]:
        cfg.validate()  # surfaces bad base config before any trial runs
    sweep_dir = run_sweep(spec, _out_root(args.out), jobs=max(1, args.jobs))
    print((sweep_dir / "report.txt").read_text())
    print(f"artifacts: {sweep_dir}")
    return EXIT_OK


def _collect_records(inputs: list[str]) -> list[dict]:
    recs: list[dict] = []
    for item in inputs:
        path = Path(item)
        if path.is_dir():
            for f in sorted(path.glob("*.json")):
                if f.name == "spec.json":
                    continue
                recs.append(json.loads(f.read_text()))
        elif path.suffix == ".json":
            recs.append(json.loads(path.read_text()))
        else:
            raise ValueError(f"not a trial record or sweep dir: {item}")
    return recs


def cmd_report(args) -> int:
    if len(args.inputs) == 1 and args.inputs[0].endswith(".csv"):
        rows = report_mod.read_aggregate_csv(args.inputs[0])
    else:
        recs = _collect_records(args.inputs)
        if not recs:
            raise ValueError("no trial records found")
        rows = report_mod.aggregate([report_mod.flatten_record(r) for r in recs])
    print(report_mod.render_tables(rows))
    print(report_mod.render_flags(report_mod.acceptance_flags(rows)))
    return EXIT_OK


def cmd_serve(args) -> int:
    from .bridge import serve_bridge
    d = _load_base(args)
    d.setdefault("case_id", 2)
    d.update(_overrides(args))
    d["teleop_source"] = "console"
    cfg = CaseConfig.from_dict(d)
    cfg.validate()
    return serve_bridge(cfg, args.port)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        if args.command == "report":
            return cmd_report(args)
        return cmd_serve(args)
    except (ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
