"""Reproducible skewed workload generation.

Produces Zipf-distributed probe/build tables sharded across data nodes,
with configurable placement (uniform vs. all hot keys concentrated on one
node) and per-shard arrival order (interleaved draw order vs. clustered by
key). A workload is a pure function of its config.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .rng import splitmix64_array, substream_seed, uniform_floats

# tuple side tags
BUILD = 0
PROBE = 1
SIDE_NAMES = {BUILD: "build", PROBE: "probe"}
SIDE_CODES = {"build": BUILD, "probe": PROBE}

PLACEMENT_UNIFORM = "uniform"
PLACEMENT_CONCENTRATED = "concentrated"
ARRIVAL_INTERLEAVED = "interleaved"
ARRIVAL_CLUSTERED = "clustered"

# substream tags for the per-purpose RNG streams
_TAG_PROBE_KEYS = 0x50524F42
_TAG_BUILD_KEYS = 0x424C4431
_TAG_PROBE_PLACE = 0x504C4143
_TAG_BUILD_PLACE = 0x42504C43

# generator-side definition of a "hot" key for concentrated placement:
# probe-side frequency at or above this fraction
DEFAULT_THETA_GEN = 0.001


class Tuple(NamedTuple):
    key: int
    node: int
    seq: int
    side: int

    @property
    def rowid(self) -> tuple[int, int]:
        return (self.node, self.seq)


def rowid_code(t: Tuple) -> int:
    """Pack (origin node, per-node sequence) into one integer id."""
    return (t.node << 40) | t.seq


@dataclass(frozen=True)
class WorkloadConfig:
    n_nodes: int = 3
    s_count: int = 30_000
    rs_ratio: float = 2.0 / 3.0
    universe: int = 10_000
    zipf_z: float = 1.25
    placement: str = PLACEMENT_UNIFORM
    skew_node: int = 0
    arrival: str = ARRIVAL_INTERLEAVED
    seed: int = 1
    theta_gen: float = DEFAULT_THETA_GEN

    @property
    def r_count(self) -> int:
        return int(round(self.rs_ratio * self.s_count))

    def validate(self) -> None:
        if self.n_nodes < 2:
            raise ValueError(f"n_nodes must be >= 2, got {self.n_nodes}")
        if self.s_count < 1:
            raise ValueError("s_count must be >= 1")
        if self.universe < 1:
            raise ValueError("universe must be >= 1")
        if self.rs_ratio <= 0:
            raise ValueError("rs_ratio must be > 0")
        if self.r_count < 1:
            raise ValueError("rs_ratio * s_count rounds to zero tuples")
        if self.zipf_z < 0:
            raise ValueError("zipf_z must be >= 0")
        if self.placement not in (PLACEMENT_UNIFORM, PLACEMENT_CONCENTRATED):
            raise ValueError(f"unknown placement {self.placement!r}")
        if self.placement == PLACEMENT_CONCENTRATED and not (
            0 <= self.skew_node < self.n_nodes
        ):
            raise ValueError(f"skew_node {self.skew_node} out of range [0, {self.n_nodes})")
        if self.arrival not in (ARRIVAL_INTERLEAVED, ARRIVAL_CLUSTERED):
            raise ValueError(f"unknown arrival {self.arrival!r}")


@dataclass
class Workload:
    cfg: WorkloadConfig
    build_shards: list[list[Tuple]]
    probe_shards: list[list[Tuple]]
    true_counts: dict[int, int] = field(default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return len(self.probe_shards)


def gen_zipf_keys(count: int, universe: int, z: float, seed: int) -> list[int]:
    """Draw `count` keys i.i.d. with P(rank r) proportional to 1/r^z.

    Rank r in 1..universe maps to key value r-1, so smaller key values are
    the more frequent ones. Sampling is inverse-CDF over the precomputed
    cumulative rank weights; the draw stream is splitmix64(seed).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if universe < 1:
        raise ValueError("universe must be >= 1")
    ranks = np.arange(1, universe + 1, dtype=np.float64)
    weights = ranks ** (-float(z))
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    u = uniform_floats(seed, count)
    keys = np.searchsorted(cdf, u, side="right")
    np.minimum(keys, universe - 1, out=keys)
    return [int(k) for k in keys]


def _assign_nodes(keys: list[int], cfg: WorkloadConfig, seed: int,
                  hot_keys: frozenset[int]) -> list[int]:
    draws = splitmix64_array(seed, len(keys))
    nodes = (draws % np.uint64(cfg.n_nodes)).astype(np.int64)
    if cfg.placement == PLACEMENT_CONCENTRATED:
        out = []
        skew_node = cfg.skew_node
        for k, v in zip(keys, nodes):
            out.append(skew_node if k in hot_keys else int(v))
        return out
    return [int(v) for v in nodes]


def build_workload(cfg: WorkloadConfig) -> Workload:
    """Materialize the probe/build shards described by `cfg`.

    Build keys come from an independent stream with the same Zipf law as
    the probe side, so hot probe keys have matching build tuples. Under
    concentrated placement, every tuple (either side) whose key reaches the
    generator hot-key threshold on the probe side lands on `skew_node`.
    """
    cfg.validate()
    probe_keys = gen_zipf_keys(
        cfg.s_count, cfg.universe, cfg.zipf_z, substream_seed(cfg.seed, _TAG_PROBE_KEYS)
    )
    build_keys = gen_zipf_keys(
        cfg.r_count, cfg.universe, cfg.zipf_z, substream_seed(cfg.seed, _TAG_BUILD_KEYS)
    )
    true_counts: dict[int, int] = dict(Counter(probe_keys))

    cut = cfg.theta_gen * cfg.s_count
    hot_keys = frozenset(k for k, c in true_counts.items() if c >= cut)

    build_nodes = _assign_nodes(
        build_keys, cfg, substream_seed(cfg.seed, _TAG_BUILD_PLACE), hot_keys
    )
    probe_nodes = _assign_nodes(
        probe_keys, cfg, substream_seed(cfg.seed, _TAG_PROBE_PLACE), hot_keys
    )

    build_shards: list[list[Tuple]] = [[] for _ in range(cfg.n_nodes)]
    probe_shards: list[list[Tuple]] = [[] for _ in range(cfg.n_nodes)]
    seq = [0] * cfg.n_nodes  # one sequence counter per node, shared by both sides
    for k, node in zip(build_keys, build_nodes):
        build_shards[node].append(Tuple(k, node, seq[node], BUILD))
        seq[node] += 1
    for k, node in zip(probe_keys, probe_nodes):
        probe_shards[node].append(Tuple(k, node, seq[node], PROBE))
        seq[node] += 1

    if cfg.arrival == ARRIVAL_CLUSTERED:
        for shard in build_shards:
            shard.sort(key=lambda t: t.key)  # stable: draw order kept within a key
        for shard in probe_shards:
            shard.sort(key=lambda t: t.key)

    return Workload(cfg, build_shards, probe_shards, true_counts)


def oracle_skew_keys(workload: Workload, theta: float) -> frozenset[int]:
    """Keys whose exact probe-side frequency meets or exceeds theta."""
    cut = theta * workload.cfg.s_count
    return frozenset(k for k, c in workload.true_counts.items() if c >= cut)


# ---------------------------------------------------------------------------
# CSV import/export (columns: side,node,seq,key)
# ---------------------------------------------------------------------------

def save_workload_csv(workload: Workload, path: str) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["side", "node", "seq", "key"])
        for shards in (workload.build_shards, workload.probe_shards):
            for shard in shards:
                for t in shard:
                    w.writerow([SIDE_NAMES[t.side], t.node, t.seq, t.key])


def load_workload_csv(path: str, cfg: WorkloadConfig | None = None) -> Workload:
    """Rebuild a Workload from its CSV export.

    Row order within a (side, node) group is the shard arrival order. When
    no config is given, a minimal one is inferred from the file contents.
    """
    rows: list[tuple[int, int, int, int]] = []
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r)
        if header != ["side", "node", "seq", "key"]:
            raise ValueError(f"unexpected workload CSV header: {header}")
        for side, node, seq, key in r:
            rows.append((SIDE_CODES[side], int(node), int(seq), int(key)))

    n_nodes = max(node for _, node, _, _ in rows) + 1
    s_count = sum(1 for side, _, _, _ in rows if side == PROBE)
    r_count = sum(1 for side, _, _, _ in rows if side == BUILD)
    if cfg is None:
        universe = max(key for _, _, _, key in rows) + 1
        cfg = WorkloadConfig(
            n_nodes=max(n_nodes, 2),
            s_count=s_count,
            rs_ratio=r_count / s_count,
            universe=universe,
        )
    build_shards: list[list[Tuple]] = [[] for _ in range(cfg.n_nodes)]
    probe_shards: list[list[Tuple]] = [[] for _ in range(cfg.n_nodes)]
    true_counts: Counter[int] = Counter()
    for side, node, seq, key in rows:
        t = Tuple(key, node, seq, side)
        if side == BUILD:
            build_shards[node].append(t)
        else:
            probe_shards[node].append(t)
            true_counts[key] += 1
    return Workload(cfg, build_shards, probe_shards, dict(true_counts))


# ---------------------------------------------------------------------------
# Plain-text config loading (section-prefixed key=value lines)
# ---------------------------------------------------------------------------

_WORKLOAD_FIELDS = {
    "n_nodes": int,
    "s_count": int,
    "rs_ratio": float,
    "universe": int,
    "z": float,  # maps to zipf_z
    "placement": str,
    "skew_node": int,
    "arrival": str,
    "seed": int,
    "theta_gen": float,
}


def workload_config_from_items(items: dict[str, str]) -> WorkloadConfig:
    """Build a WorkloadConfig from `workload.`-prefixed key=value pairs."""
    kwargs = {}
    for name, raw in items.items():
        if name not in _WORKLOAD_FIELDS:
            raise ValueError(f"unknown workload config key: workload.{name}")
        conv = _WORKLOAD_FIELDS[name]
        value = conv(raw)
        kwargs["zipf_z" if name == "z" else name] = value
    cfg = WorkloadConfig(**kwargs)
    cfg.validate()
    return cfg


def load_workload_config(path: str) -> WorkloadConfig:
    """Read the workload.* section of a key=value config file."""
    items: dict[str, str] = {}
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            k, v = line.split("=", 1)
            k = k.strip()
            if k.startswith("workload."):
                items[k.split(".", 1)[1]] = v.strip()
    return workload_config_from_items(items)
