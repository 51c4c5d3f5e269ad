"""Evaluation quantities and independent report verification.

The summary CSV column order is fixed so external plotting keeps working:
strategy,n,bandwidth,z,ratio,epsilon,theta,seed,result_count,elapsed_s,
throughput,total_bytes,B_global
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Any

from .bppr import balance_factor
from .datagen import Workload
from .simulator import CostModel, SimReport, oracle_join

SUMMARY_COLUMNS = [
    "strategy", "n", "bandwidth", "z", "ratio", "epsilon", "theta", "seed",
    "result_count", "elapsed_s", "throughput", "total_bytes", "B_global",
]


def throughput(report: SimReport) -> float:
    """Result tuples generated per second of model time."""
    if report.elapsed_seconds <= 0:
        raise ValueError("elapsed_seconds must be positive")
    return report.total_result_count / report.elapsed_seconds


def global_balance(report: SimReport) -> float:
    """Balance factor over per-node skewed-tuple receipts (0 if none)."""
    return balance_factor([l.skewed_received for l in report.ledgers])


def summary_row(report: SimReport, workload: Workload, cost: CostModel) -> dict[str, Any]:
    cfg = workload.cfg
    return {
        "strategy": report.strategy,
        "n": report.n,
        "bandwidth": cost.bandwidth_mbps,
        "z": cfg.zipf_z,
        "ratio": cfg.rs_ratio,
        "epsilon": report.diagnostics.get("epsilon"),
        "theta": report.diagnostics.get("theta"),
        "seed": cfg.seed,
        "result_count": report.total_result_count,
        "elapsed_s": report.elapsed_seconds,
        "throughput": throughput(report),
        "total_bytes": report.total_network_bytes,
        "B_global": report.global_balance_B,
    }


def write_summary_csv(rows: list[dict[str, Any]], path: str) -> None:
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=SUMMARY_COLUMNS)
        w.writeheader()
        for row in rows:
            w.writerow(row)


def read_summary_csv(path: str) -> list[dict[str, Any]]:
    out = []
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            parsed: dict[str, Any] = dict(row)
            for k in ("n", "result_count", "total_bytes", "seed"):
                parsed[k] = int(float(row[k]))
            for k in ("bandwidth", "z", "ratio", "epsilon", "theta",
                      "elapsed_s", "throughput", "B_global"):
                parsed[k] = float(row[k])
            out.append(parsed)
    return out


@dataclass
class SweepResult:
    axis: str
    points: list[tuple[float, list[dict[str, Any]]]]

    def rows(self) -> list[dict[str, Any]]:
        out = []
        for value, rows in self.points:
            for row in rows:
                r = dict(row)
                r["axis"] = self.axis
                r["axis_value"] = value
                out.append(r)
        return out


@dataclass
class Verdict:
    name: str
    ok: bool
    detail: str = ""


def verify_report(report: SimReport, workload: Workload,
                  trace: list[dict] | None = None) -> list[Verdict]:
    """Independently recompute a report's headline numbers.

    Checks result count and fingerprint against the single-node oracle,
    byte conservation, and the published balance factor; with a trace it
    also recounts bytes and skewed receipts from raw delivery events.
    """
    verdicts: list[Verdict] = []

    oracle = oracle_join(workload)
    ok = report.total_result_count == oracle.size
    verdicts.append(Verdict(
        "result_count_vs_oracle", ok,
        f"report={report.total_result_count} oracle={oracle.size}"))
    fp = report.diagnostics.get("result_fingerprint")
    verdicts.append(Verdict(
        "result_fingerprint_vs_oracle", fp == oracle.fingerprint,
        f"report={fp} oracle={oracle.fingerprint}"))

    sent = sum(l.bytes_sent for l in report.ledgers)
    recv = sum(l.bytes_received for l in report.ledgers)
    verdicts.append(Verdict(
        "byte_conservation",
        sent == recv == report.total_network_bytes,
        f"sent={sent} recv={recv} total={report.total_network_bytes}"))

    recomputed_b = global_balance(report)
    verdicts.append(Verdict(
        "balance_factor_recompute", recomputed_b == report.global_balance_B,
        f"recomputed={recomputed_b} reported={report.global_balance_B}"))

    neg = [f for l in report.ledgers for f, v in l.as_dict().items() if v < 0]
    verdicts.append(Verdict("ledger_non_negative", not neg, str(neg)))

    if trace is not None:
        sent_t = [0] * report.n
        recv_t = [0] * report.n
        skew_t = [0] * report.n
        for ev in trace:
            b = ev.get("bytes", 0)
            if b:
                sent_t[ev["src"]] += b
                recv_t[ev["dst"]] += b
            if ev["kind"] == "probe_deliver" and ev.get("skew"):
                skew_t[ev["dst"]] += 1
        byte_ok = all(
            sent_t[i] == report.ledgers[i].bytes_sent
            and recv_t[i] == report.ledgers[i].bytes_received
            for i in range(report.n)
        )
        verdicts.append(Verdict(
            "trace_byte_recount", byte_ok,
            f"sent={sent_t} recv={recv_t}"))
        skew_ok = all(
            skew_t[i] == report.ledgers[i].skewed_received
            for i in range(report.n)
        )
        verdicts.append(Verdict(
            "trace_skew_recount", skew_ok, f"recount={skew_t}"))
        verdicts.append(Verdict(
            "trace_balance_recompute",
            balance_factor(skew_t) == report.global_balance_B,
            f"from_trace={balance_factor(skew_t)}"))

    return verdicts


def all_passed(verdicts: list[Verdict]) -> bool:
    return all(v.ok for v in verdicts)


TRACE_COLUMNS = ["kind", "src", "dst", "origin", "key", "rowid", "bytes",
                 "count", "skew", "bucket", "ulen"]


def write_trace_csv(trace: list[dict], path: str) -> None:
    """Flatten delivery/pull/route events for external rechecking."""
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=TRACE_COLUMNS, extrasaction="ignore",
                           restval="")
        w.writeheader()
        for ev in trace:
            w.writerow(ev)
