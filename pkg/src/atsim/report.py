"""Aggregation and comparison tables over trial records.

A sweep leaves one JSON record per trial. This module flattens those records
into rows, reduces them to per-(case, scenario, metric) statistics, renders
text tables with cases as rows and scenarios as columns, and evaluates the
experiment's pass/fail checks from the aggregate alone.
"""
from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass

from .supervisor import COST, COST_MSG_BYTE

# per-trial scalar metrics carried into the aggregate
METRIC_NAMES = [
    "reached", "collision", "duration_s", "efficiency_s", "goal_error_m",
    "tracking_error_m", "client_throughput_bps", "master_throughput_bps",
    "client_loss_bps", "master_loss_bps", "latency_avg_s",
    "client_load", "master_load",
]

CSV_HEADER = ["case", "scenario", "metric", "mean", "stddev", "min", "max", "n"]


def node_load(counters: dict) -> float:
    """Deterministic load score for one node: its mapping updates, plans,
    and message traffic, weighted by the fixed cost table."""
    return (counters.get("grid_update", 0) * COST["grid_update"]
            + counters.get("plan", 0) * COST["plan"]
            + (counters.get("msg_in", 0) + counters.get("msg_out", 0)) * COST["msg_in"]
            + counters.get("msg_bytes", 0) * COST_MSG_BYTE)


def flatten_record(rec: dict) -> dict:
    """One trial's metrics JSON -> flat row of plain floats."""
    row = {
        "case": int(rec["case_id"]),
        "scenario": int(rec["scenario_id"]),
        "goal_x": float(rec["goal"][0]),
        "goal_y": float(rec["goal"][1]),
        "seed": int(rec["seed"]),
    }
    for name in METRIC_NAMES:
        if name == "client_load":
            row[name] = node_load(rec["compute"]["client"])
        elif name == "master_load":
            row[name] = node_load(rec["compute"]["master"])
        elif name in ("reached", "collision"):
            row[name] = 1.0 if rec[name] else 0.0
        else:
            row[name] = float(rec[name])
    return row


@dataclass
class ReportRow:
    case: int
    scenario: int
    metric: str
    mean: float
    stddev: float
    min: float
    max: float
    n: int


def aggregate(rows: list[dict]) -> list[ReportRow]:
    """Reduce flat trial rows to per-(case, scenario, metric) statistics,
    pooling goals and seeds."""
    if not rows:
        raise ValueError("no trial rows to aggregate")
    cells: dict[tuple[int, int], list[dict]] = {}
    for r in rows:
        cells.setdefault((r["case"], r["scenario"]), []).append(r)
    out: list[ReportRow] = []
    for (case, sc) in sorted(cells):
        group = cells[(case, sc)]
        for name in METRIC_NAMES:
            vals = [g[name] for g in group]
            out.append(ReportRow(
                case=case, scenario=sc, metric=name,
                mean=statistics.fmean(vals),
                stddev=statistics.stdev(vals) if len(vals) > 1 else 0.0,
                min=min(vals), max=max(vals), n=len(vals)))
    return out


def _fmt(x: float) -> str:
    return format(x, ".10g")


def write_aggregate_csv(path, rows: list[ReportRow]) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([r.case, r.scenario, r.metric,
                        _fmt(r.mean), _fmt(r.stddev), _fmt(r.min), _fmt(r.max), r.n])


def read_aggregate_csv(path) -> list[ReportRow]:
    out: list[ReportRow] = []
    with open(path, newline="") as f:
        rd = csv.DictReader(f)
        if rd.fieldnames != CSV_HEADER:
            raise ValueError(f"unexpected csv header in {path}")
        for rec in rd:
            out.append(ReportRow(
                case=int(rec["case"]), scenario=int(rec["scenario"]),
                metric=rec["metric"], mean=float(rec["mean"]),
                stddev=float(rec["stddev"]), min=float(rec["min"]),
                max=float(rec["max"]), n=int(rec["n"])))
    if not out:
        raise ValueError(f"empty aggregate in {path}")
    return out


def _index(rows: list[ReportRow]) -> dict:
    return {(r.case, r.scenario, r.metric): r for r in rows}


def render_tables(rows: list[ReportRow]) -> str:
    """One text table per metric: cases as rows, scenarios as columns,
    cells are means (stddev in parentheses when n > 1)."""
    idx = _index(rows)
    cases = sorted({r.case for r in rows})
    scenarios = sorted({r.scenario for r in rows})
    lines: list[str] = []
    for metric in METRIC_NAMES:
        if not any(r.metric == metric for r in rows):
            continue
        lines.append(f"== {metric} ==")
        head = ["case \\ scenario"] + [f"S{s}" for s in scenarios]
        body: list[list[str]] = []
        for c in cases:
            row = [f"case {c}"]
            for s in scenarios:
                r = idx.get((c, s, metric))
                if r is None:
                    row.append("-")
                elif r.n > 1:
                    row.append(f"{r.mean:.4g} ({r.stddev:.2g})")
                else:
                    row.append(f"{r.mean:.4g}")
            body.append(row)
        widths = [max(len(head[i]), max(len(b[i]) for b in body)) for i in range(len(head))]
        lines.append("  ".join(h.ljust(widths[i]) for i, h in enumerate(head)))
        for b in body:
            lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(b)))
        lines.append("")
    return "\n".join(lines)


def acceptance_flags(rows: list[ReportRow]) -> dict[str, bool | None]:
    """Experiment-level pass/fail checks, each a pure function of the
    aggregate. A check whose cells are absent reports None."""
    idx = _index(rows)

    def cell(case, sc, metric):
        return idx.get((case, sc, metric))

    flags: dict[str, bool | None] = {}

    # every coupled trial at scenario 1 reaches within a meter
    r_reach = cell(3, 1, "reached")
    r_err = cell(3, 1, "goal_error_m")
    if r_reach is None or r_err is None:
        flags["goal_accuracy"] = None
    else:
        flags["goal_accuracy"] = r_reach.min >= 1.0 and r_err.max <= 1.0

    # coupled mode moves at most a fifth of the full-offload bytes
    t1 = cell(1, 2, "client_throughput_bps")
    t3 = cell(3, 2, "client_throughput_bps")
    flags["throughput_reduction"] = (
        None if t1 is None or t3 is None else t3.mean < t1.mean / 5.0)

    # coupled tracking beats blind mirroring and varies less across rooms
    per_sc = {}
    for case in (2, 3):
        means = [cell(case, s, "tracking_error_m") for s in (2, 3)]
        per_sc[case] = None if any(m is None for m in means) else [m.mean for m in means]
    if per_sc[2] is None or per_sc[3] is None:
        flags["tracking_improvement"] = None
    else:
        m2, m3 = statistics.fmean(per_sc[2]), statistics.fmean(per_sc[3])
        s2, s3 = statistics.stdev(per_sc[2]), statistics.stdev(per_sc[3])
        flags["tracking_improvement"] = m3 < m2 and s3 <= s2
    # onboard and offloaded autonomy reach everything cleanly
    ok: bool | None = True
    for case in (0, 1):
        for sc in (1, 2, 3):
            rr, ee, cc = (cell(case, sc, "reached"), cell(case, sc, "goal_error_m"),
                          cell(case, sc, "collision"))
            if rr is None or ee is None or cc is None:
                ok = None
                break
            if not (rr.min >= 1.0 and ee.max <= 0.3 and cc.max == 0.0):
                ok = False
                break
        if ok is not True:
            break
    flags["autonomy_baselines"] = ok

    # moving obstacles and the omni base stay within the error budget
    ok = True
    for sc in (4, 5):
        ee, tt = cell(3, sc, "goal_error_m"), cell(3, sc, "tracking_error_m")
        if ee is None or tt is None:
            ok = None
            break
        if not (ee.mean <= 0.75 and tt.mean <= 0.75):
            ok = False
            break
    flags["robustness"] = ok

    # client-side load ordering across the four placements
    loads = [cell(c, 2, "client_load") for c in (0, 1, 2, 3)]
    if any(x is None for x in loads):
        flags["compute_ordering"] = None
    else:
        l0, l1, l2, l3 = (x.mean for x in loads)
        flags["compute_ordering"] = l0 > l1 >= l3 > l2
    return flags


def render_flags(flags: dict[str, bool | None]) -> str:
    lines = ["== checks =="]
    for name, val in flags.items():
        mark = "n/a " if val is None else ("PASS" if val else "FAIL")
        lines.append(f"{mark}  {name}")
    return "\n".join(lines) + "\n"
