"""Batch experiment runner.

Subcommands:
  gen     write a workload CSV from a config
  run     execute the configured strategies once per seed; summary rows go
          to stdout, full reports to a JSON file
  sweep   re-run the experiment along one axis (bandwidth | epsilon | zipf
          | rs_ratio | nodes) and emit a combined CSV
  verify  recheck a JSON report against its workload export
  report  render figures from a run/sweep CSV

Configs are flat key=value text with section prefixes (workload.z=1.25).
Exit codes: 0 success, 1 usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import multiprocessing
import os
import sys
from dataclasses import dataclass, field
from typing import Any

from . import metrics, plots
from .datagen import (
    WorkloadConfig,
    build_workload,
    load_workload_csv,
    save_workload_csv,
    workload_config_from_items,
)
from .simulator import DETECTOR_MODES, ClusterSpec, CostModel, SimReport, run
from .strategies import STRATEGY_NAMES

SWEEP_AXES = ("bandwidth", "epsilon", "zipf", "rs_ratio", "nodes")


@dataclass
class ExperimentConfig:
    workload: WorkloadConfig = field(default_factory=WorkloadConfig)
    cost: CostModel = field(default_factory=CostModel)
    response_node: int = 0
    strategies: list[str] = field(default_factory=lambda: list(STRATEGY_NAMES))
    detector_mode: str = "oracle"
    epsilon: float = 0.2
    theta: float = 0.001
    capacity: int = 256
    warmup: int = 1000
    seeds: list[int] = field(default_factory=lambda: [1])
    out: str = "results"

    def validate(self) -> None:
        self.workload.validate()
        self.cost.validate()
        if not self.strategies:
            raise ValueError("at least one strategy required")
        for s in self.strategies:
            if s not in STRATEGY_NAMES:
                raise ValueError(f"unknown strategy {s!r}")
        if self.detector_mode not in DETECTOR_MODES:
            raise ValueError(f"unknown detector mode {self.detector_mode!r}")
        if not self.seeds:
            raise ValueError("at least one seed required")


def _parse_kv_file(path: str) -> dict[str, str]:
    items: dict[str, str] = {}
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            k, v = line.split("=", 1)
            items[k.strip()] = v.strip()
    return items


_COST_FIELDS = {
    "bandwidth_mbps": float,
    "tuple_wire_bytes": int,
    "pull_request_bytes": int,
    "c_build": float,
    "c_probe": float,
    "detect_cost": float,
}

_RUN_FIELDS = {
    "detector": str,
    "epsilon": float,
    "theta": float,
    "capacity": int,
    "warmup": int,
    "out": str,
}


def load_experiment_config(path: str | None) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if path is None:
        return cfg
    items = _parse_kv_file(path)
    wl_items = {k.split(".", 1)[1]: v for k, v in items.items()
                if k.startswith("workload.")}
    if wl_items:
        cfg.workload = workload_config_from_items(wl_items)
    cost_kwargs = {}
    for k, v in items.items():
        if not k.startswith("cost."):
            continue
        name = k.split(".", 1)[1]
        if name not in _COST_FIELDS:
            raise ValueError(f"unknown cost config key: {k}")
        cost_kwargs[name] = _COST_FIELDS[name](v)
    if cost_kwargs:
        cfg.cost = dataclasses.replace(CostModel(), **cost_kwargs)
    if "cluster.response_node" in items:
        cfg.response_node = int(items["cluster.response_node"])
    for k, v in items.items():
        if not k.startswith("run."):
            continue
        name = k.split(".", 1)[1]
        if name == "strategies":
            cfg.strategies = (list(STRATEGY_NAMES) if v == "all"
                              else [s.strip() for s in v.split(",") if s.strip()])
        elif name == "seeds":
            cfg.seeds = [int(s) for s in v.split(",") if s.strip()]
        elif name in _RUN_FIELDS:
            if name == "detector":
                cfg.detector_mode = v
            else:
                setattr(cfg, name, _RUN_FIELDS[name](v))
        else:
            raise ValueError(f"unknown run config key: {k}")
    cfg.validate()
    return cfg


def _run_one(cfg: ExperimentConfig, strategy: str, seed: int,
             trace: list | None = None) -> tuple[SimReport, dict[str, Any]]:
    wl_cfg = dataclasses.replace(cfg.workload, seed=seed)
    workload = build_workload(wl_cfg)
    cluster = ClusterSpec(wl_cfg.n_nodes, cfg.response_node)
    report = run(
        workload, strategy, cluster, cfg.cost, cfg.detector_mode,
        epsilon=cfg.epsilon, theta=cfg.theta, capacity=cfg.capacity,
        warmup=cfg.warmup, trace=trace,
    )
    row = metrics.summary_row(report, workload, cfg.cost)
    return report, row


# -- subcommands --------------------------------------------------------------

def cmd_gen(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config)
    out = args.out or f"{cfg.out}_workload.csv"
    workload = build_workload(cfg.workload)
    _ensure_dir(out)
    save_workload_csv(workload, out)
    print(f"wrote {cfg.workload.s_count + cfg.workload.r_count} tuples to {out}")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config)
    if args.seeds:
        cfg.seeds = [int(s) for s in args.seeds.split(",")]
    out = args.out or cfg.out
    rows: list[dict[str, Any]] = []
    reports: list[dict[str, Any]] = []
    print(",".join(metrics.SUMMARY_COLUMNS))
    for seed in cfg.seeds:
        for strategy in cfg.strategies:
            trace: list | None = [] if args.trace else None
            report, row = _run_one(cfg, strategy, seed, trace)
            rows.append(row)
            d = report.to_dict()
            if args.trace:
                d["trace"] = trace
            reports.append(d)
            print(",".join(str(row[c]) for c in metrics.SUMMARY_COLUMNS))
    _ensure_dir(out + ".json")
    with open(out + ".json", "w") as f:
        json.dump({"reports": reports}, f)
    metrics.write_summary_csv(rows, out + ".csv")
    if args.trace:
        merged = [ev for d in reports for ev in d.get("trace", ())]
        metrics.write_trace_csv(merged, out + "_trace.csv")
    return 0


def _sweep_point(packed) -> list[dict[str, Any]]:
    cfg, axis, value, seed = packed
    point_cfg = _apply_axis(cfg, axis, value)
    rows = []
    for strategy in point_cfg.strategies:
        _, row = _run_one(point_cfg, strategy, seed)
        row["axis"] = axis
        row["axis_value"] = value
        rows.append(row)
    return rows


def _apply_axis(cfg: ExperimentConfig, axis: str, value: float) -> ExperimentConfig:
    out = dataclasses.replace(cfg)
    if axis == "bandwidth":
        out.cost = dataclasses.replace(cfg.cost, bandwidth_mbps=float(value))
    elif axis == "epsilon":
        out.epsilon = float(value)
    elif axis == "zipf":
        out.workload = dataclasses.replace(cfg.workload, zipf_z=float(value))
    elif axis == "rs_ratio":
        out.workload = dataclasses.replace(cfg.workload, rs_ratio=float(value))
    elif axis == "nodes":
        out.workload = dataclasses.replace(cfg.workload, n_nodes=int(value))
    else:
        raise ValueError(f"unknown sweep axis {axis!r}")
    return out


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config)
    if args.seeds:
        cfg.seeds = [int(s) for s in args.seeds.split(",")]
    values = [float(v) for v in args.values.split(",")]
    points = [(cfg, args.axis, v, seed) for v in values for seed in cfg.seeds]
    if args.parallel > 1:
        with multiprocessing.Pool(args.parallel) as pool:
            chunks = pool.map(_sweep_point, points)
    else:
        chunks = [_sweep_point(p) for p in points]
    rows = [r for chunk in chunks for r in chunk]
    # parallel execution must never change bytes on disk
    rows.sort(key=lambda r: (r["axis_value"], r["strategy"], r["seed"]))
    out = args.out or f"{cfg.out}_sweep_{args.axis}.csv"
    _ensure_dir(out)
    cols = metrics.SUMMARY_COLUMNS + ["axis", "axis_value"]
    import csv as _csv

    with open(out, "w", newline="") as f:
        w = _csv.DictWriter(f, fieldnames=cols)
        w.writeheader()
        for row in rows:
            w.writerow(row)
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    with open(args.report) as f:
        payload = json.load(f)
    reports = payload.get("reports", [])
    if not reports:
        print("verify: no reports in file", file=sys.stderr)
        return 1
    workload = load_workload_csv(args.workload)
    failed = False
    for d in reports:
        report = SimReport.from_dict(d)
        trace = d.get("trace")
        if trace is None:
            print("verify: report carries no trace (re-run with --trace)",
                  file=sys.stderr)
            return 1
        verdicts = metrics.verify_report(report, workload, trace)
        for v in verdicts:
            status = "pass" if v.ok else "FAIL"
            print(f"{report.strategy}/{report.detector_mode} {v.name}: {status} ({v.detail})")
            failed = failed or not v.ok
    return 2 if failed else 0


def cmd_report(args: argparse.Namespace) -> int:
    rows = _read_rows(args.input)
    if not rows:
        print("report: no rows to plot", file=sys.stderr)
        return 1
    paths = plots.render_csv(rows, args.out_prefix)
    for p in paths:
        print(f"wrote {p}")
    return 0


def _read_rows(path: str) -> list[dict[str, Any]]:
    import csv as _csv

    out = []
    with open(path, newline="") as f:
        for row in _csv.DictReader(f):
            parsed: dict[str, Any] = dict(row)
            for k, v in row.items():
                if k in ("strategy", "axis"):
                    continue
                try:
                    parsed[k] = float(v)
                except (TypeError, ValueError):
                    pass
            out.append(parsed)
    return out


def _ensure_dir(path: str) -> None:
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skewjoin",
                                description="skewed distributed hash join simulator")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write the configured workload as CSV")
    g.add_argument("--config", default=None)
    g.add_argument("--out", default=None)
    g.set_defaults(fn=cmd_gen)

    r = sub.add_parser("run", help="run configured strategies once per seed")
    r.add_argument("--config", default=None)
    r.add_argument("--out", default=None)
    r.add_argument("--seeds", default=None, help="comma list, overrides config")
    r.add_argument("--trace", action="store_true",
                   help="embed delivery traces in the JSON report")
    r.set_defaults(fn=cmd_run)

    s = sub.add_parser("sweep", help="sweep one axis and write a CSV")
    s.add_argument("--config", default=None)
    s.add_argument("--axis", required=True, choices=SWEEP_AXES)
    s.add_argument("--values", required=True, help="comma list of axis values")
    s.add_argument("--seeds", default=None)
    s.add_argument("--parallel", type=int, default=1)
    s.add_argument("--out", default=None)
    s.set_defaults(fn=cmd_sweep)

    v = sub.add_parser("verify", help="recheck a report against its workload")
    v.add_argument("--report", required=True)
    v.add_argument("--workload", required=True)
    v.set_defaults(fn=cmd_verify)

    rep = sub.add_parser("report", help="render figures from a summary CSV")
    rep.add_argument("--input", required=True)
    rep.add_argument("--out-prefix", required=True)
    rep.set_defaults(fn=cmd_report)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
