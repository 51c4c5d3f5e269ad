"""Figure rendering for run and sweep summaries.

Reads the delimited output the CLI emits and writes PNG figures next to
it: per-strategy curves along a sweep axis, or bars for single-point runs.
"""

from __future__ import annotations

import os
from typing import Any

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_METRICS = [
    ("throughput", "Throughput (result tuples / s)"),
    ("total_bytes", "Network traffic (bytes)"),
    ("B_global", "Global balance factor"),
]

_STYLE = {
    "grahj": {"color": "#888888", "marker": "o"},
    "prpd": {"color": "#1f77b4", "marker": "s"},
    "sfr": {"color": "#2ca02c", "marker": "^"},
    "pnr": {"color": "#d62728", "marker": "v"},
    "bppr": {"color": "#9467bd", "marker": "D"},
}


def _strategies(rows: list[dict[str, Any]]) -> list[str]:
    seen: list[str] = []
    for r in rows:
        if r["strategy"] not in seen:
            seen.append(r["strategy"])
    return seen


def render_sweep(rows: list[dict[str, Any]], axis: str, out_prefix: str) -> list[str]:
    """One PNG per metric, strategies as labelled curves over the axis."""
    paths = []
    for metric, label in _METRICS:
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        for strat in _strategies(rows):
            pts = sorted(
                (r["axis_value"], r[metric]) for r in rows if r["strategy"] == strat
            )
            xs = [p[0] for p in pts]
            ys = [p[1] for p in pts]
            ax.plot(xs, ys, label=strat, **_STYLE.get(strat, {}))
        ax.set_xlabel(axis)
        ax.set_ylabel(label)
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.tight_layout()
        path = f"{out_prefix}_{metric}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)
    return paths


def render_run(rows: list[dict[str, Any]], out_prefix: str) -> list[str]:
    """Bar charts comparing strategies at a single configuration."""
    paths = []
    strats = _strategies(rows)
    for metric, label in _METRICS:
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        values = []
        for s in strats:
            vals = [r[metric] for r in rows if r["strategy"] == s]
            values.append(sum(vals) / len(vals))
        colors = [_STYLE.get(s, {}).get("color", "#333333") for s in strats]
        ax.bar(strats, values, color=colors)
        ax.set_ylabel(label)
        ax.grid(True, axis="y", alpha=0.3)
        fig.tight_layout()
        path = f"{out_prefix}_{metric}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)
    return paths


def render_csv(csv_rows: list[dict[str, Any]], out_prefix: str) -> list[str]:
    """Dispatch on whether the rows carry a sweep axis."""
    os.makedirs(os.path.dirname(out_prefix) or ".", exist_ok=True)
    if csv_rows and "axis_value" in csv_rows[0]:
        axis = csv_rows[0].get("axis", "axis")
        return render_sweep(csv_rows, axis, out_prefix)
    return render_run(csv_rows, out_prefix)
