"""Deterministic shared-nothing cluster simulator for distributed hash joins.

A run replays every data node's build/probe arrival stream (alternating,
round-robin across nodes), classifies probe tuples per the detector mode,
routes each tuple through the chosen strategy, and delivers it with byte
accounting. Local joins are counted symmetrically: a pair is tallied when
the later of its two sides arrives, so results are exact under any arrival
order without a phase barrier.

Build tuples live in per-node buckets that keep replication paths apart:

  H    hash-partitioned builds (only ever at the key's hash node)
  S    skew-path replicas (broadcast / grid rows)
  QP   divergence copies pushed to the hash node (grid strategy, online)
  PU   builds pulled on demand by nodes that received skewed probes

Which buckets a probe joins against depends on the strategy and on where
the copy landed; the bucket discipline guarantees each (build, probe) pair
meets at exactly one node exactly once, even when per-node detectors
disagree about a key.

Result multisets are summarized by count plus an order-invariant bilinear
fingerprint over rowid hashes, so equality against the single-node oracle
is checkable without materializing joins that can reach billions of pairs.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any

from .bppr import balance_factor
from .datagen import BUILD, PROBE, Tuple, Workload, oracle_skew_keys, rowid_code
from .detector import (
    FrozenClassifier,
    OnlineClassifier,
    OracleClassifier,
    SkewSketch,
)
from .rng import hash_node, mix64
from .strategies import ROUTES, STRATEGY_NAMES, make_context, sfr_grid

DETECTOR_MODES = ("oracle", "online", "twopass")

# If True, the per-node compute term charges c_probe for every emitted
# result pair in addition to every delivered probe tuple. Hash-join probe
# work is proportional to matches found, and without this term the
# defining failure mode of skewed joins (one node burning CPU on a hot
# key's output) cannot appear in model time at all.
PROBE_WORK_INCLUDES_MATCHES = True

# bytes per Space Saving counter record shipped during two-pass merging
SKETCH_RECORD_BYTES = 20
# bytes per per-node result count sent to the response node
AGG_COUNT_BYTES = 8

MODEL_NOTE = (
    "model time serializes per-node network and compute with no overlap; "
    "absolute throughput is not comparable to wall-clock measurements"
)

_FP_MOD = (1 << 61) - 1
_G_SALT = 0x5B1D3C4F9E2A7081
_H_SALT = 0xA3F29E18C4B7D655

# build bucket ids
_BH, _BS, _BQP, _BPU = 0, 1, 2, 3


def build_fp(code: int) -> int:
    v = mix64(code ^ _G_SALT) % _FP_MOD
    return v if v else 1


def probe_fp(code: int) -> int:
    v = mix64(code ^ _H_SALT) % _FP_MOD
    return v if v else 1


@dataclass(frozen=True)
class ClusterSpec:
    n: int
    response_node: int = 0

    def validate(self) -> None:
        if self.n < 2:
            raise ValueError("cluster needs n >= 2 nodes")
        if not (0 <= self.response_node < self.n):
            raise ValueError("response_node out of range")


@dataclass(frozen=True)
class CostModel:
    bandwidth_mbps: float = 100.0
    tuple_wire_bytes: int = 16
    pull_request_bytes: int = 24
    c_build: float = 1e-7
    c_probe: float = 1e-7
    detect_cost: float = 2e-8

    def validate(self) -> None:
        for name in ("bandwidth_mbps", "tuple_wire_bytes", "pull_request_bytes",
                     "c_build", "c_probe", "detect_cost"):
            if getattr(self, name) <= 0:
                raise ValueError(f"cost model field {name} must be positive")


@dataclass
class NodeLedger:
    bytes_sent: int = 0
    bytes_received: int = 0
    build_inserted: int = 0
    probe_processed: int = 0
    detector_observes: int = 0
    skewed_received: int = 0
    result_count: int = 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.__dict__)


@dataclass
class SimReport:
    strategy: str
    detector_mode: str
    n: int
    ledgers: list[NodeLedger]
    total_result_count: int
    total_network_bytes: int
    elapsed_seconds: float
    global_balance_B: float
    diagnostics: dict[str, Any] = field(default_factory=dict)
    model_note: str = MODEL_NOTE

    def to_dict(self) -> dict[str, Any]:
        return {
            "strategy": self.strategy,
            "detector_mode": self.detector_mode,
            "n": self.n,
            "ledgers": [l.as_dict() for l in self.ledgers],
            "total_result_count": self.total_result_count,
            "total_network_bytes": self.total_network_bytes,
            "elapsed_seconds": self.elapsed_seconds,
            "global_balance_B": self.global_balance_B,
            "diagnostics": self.diagnostics,
            "model_note": self.model_note,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SimReport":
        return cls(
            strategy=d["strategy"],
            detector_mode=d["detector_mode"],
            n=d["n"],
            ledgers=[NodeLedger(**l) for l in d["ledgers"]],
            total_result_count=d["total_result_count"],
            total_network_bytes=d["total_network_bytes"],
            elapsed_seconds=d["elapsed_seconds"],
            global_balance_B=d["global_balance_B"],
            diagnostics=d.get("diagnostics", {}),
            model_note=d.get("model_note", MODEL_NOTE),
        )


@dataclass
class OracleJoin:
    size: int
    fingerprint: int
    pairs: list[tuple[int, int]] | None = None


def oracle_join(workload: Workload, materialize: bool = False,
                limit: int = 2_000_000) -> OracleJoin:
    """Single-node ground-truth join over all shards combined.

    Size comes from the per-key frequency product; the fingerprint is
    sum over keys of (sum of build hashes) * (sum of probe hashes), which
    equals the pair-wise sum without enumerating pairs.
    """
    build_g: dict[int, int] = {}
    build_cnt: Counter[int] = Counter()
    build_rows: dict[int, list[int]] = {}
    for shard in workload.build_shards:
        for t in shard:
            code = rowid_code(t)
            build_cnt[t.key] += 1
            build_g[t.key] = (build_g.get(t.key, 0) + build_fp(code)) % _FP_MOD
            if materialize:
                build_rows.setdefault(t.key, []).append(code)

    size = 0
    fp = 0
    probe_h: dict[int, int] = {}
    pairs: list[tuple[int, int]] | None = [] if materialize else None
    for shard in workload.probe_shards:
        for t in shard:
            c = build_cnt.get(t.key)
            if not c:
                continue
            code = rowid_code(t)
            size += c
            fp = (fp + probe_fp(code) * build_g[t.key]) % _FP_MOD
            if materialize:
                if size > limit:
                    raise ValueError(f"join too large to materialize (> {limit})")
                for b in build_rows[t.key]:
                    pairs.append((b, code))
    if materialize:
        pairs.sort()
    return OracleJoin(size, fp, pairs)


def local_hash_join(build: list[Tuple], probe: list[Tuple]) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Exact inner equi-join; output is the multiset of rowid pairs."""
    index: dict[int, list[tuple[int, int]]] = {}
    for b in build:
        index.setdefault(b.key, []).append(b.rowid)
    out = []
    for p in probe:
        for rid in index.get(p.key, ()):
            out.append((rid, p.rowid))
    return out


class _Node:
    """Per-node join state: four build buckets with symmetric-count cells.

    A cell is [build_count, build_fp_sum, probe_count, probe_fp_sum]
    (plus rowid lists when pair collection is on). Probing registers the
    probe in its view buckets so later build arrivals still pair with it.
    """

    __slots__ = ("buckets", "subs", "pulled", "blists", "plists")

    def __init__(self, collect_pairs: bool) -> None:
        self.buckets: tuple[dict[int, list[int]], ...] = ({}, {}, {}, {})
        self.subs: dict[int, list[int]] = {}
        self.pulled: set[int] = set()
        self.blists: tuple[dict[int, list[int]], ...] | None = None
        self.plists: tuple[dict[int, list[int]], ...] | None = None
        if collect_pairs:
            self.blists = ({}, {}, {}, {})
            self.plists = ({}, {}, {}, {})

    def cell(self, bucket: int, key: int) -> list[int]:
        c = self.buckets[bucket].get(key)
        if c is None:
            c = [0, 0, 0, 0]
            self.buckets[bucket][key] = c
        return c


class _Run:
    def __init__(self, workload: Workload, strategy: str, cluster: ClusterSpec,
                 cost: CostModel, detector_mode: str, epsilon: float,
                 theta: float, capacity: int, warmup: int, recheck: bool,
                 active_only: bool, trace: list | None, collect_pairs: bool):
        self.w = workload
        self.strategy = strategy
        self.cluster = cluster
        self.cost = cost
        self.mode = detector_mode
        self.epsilon = epsilon
        self.theta = theta
        self.capacity = capacity
        self.warmup = warmup
        self.recheck = recheck
        self.active_only = active_only
        self.trace = trace
        self.collect_pairs = collect_pairs
        n = cluster.n
        self.n = n
        self.ledgers = [NodeLedger() for _ in range(n)]
        self.nodes = [_Node(collect_pairs) for _ in range(n)]
        self.fp = 0
        self.pairs: list[tuple[int, int]] = []
        self.pull_count = 0
        self.pull_bytes = 0
        self.skew_classified = 0
        self.sketch_bytes = [0] * n  # two-pass merge traffic per node
        self.detect_phase_observes = [0] * n
        # divergence repairs for the baselines only make sense (and are only
        # needed) when per-node online decisions can disagree
        self.repair = detector_mode == "online" and strategy in ("prpd", "pnr", "sfr")
        self.contexts = []
        self.classifiers = []
        self._q: dict[int, int] = {}

    def hash_of(self, key: int) -> int:
        q = self._q.get(key)
        if q is None:
            q = hash_node(key, self.n)
            self._q[key] = q
        return q

    # -- delivery ------------------------------------------------------------

    def _wire(self, src: int, dst: int, nbytes: int) -> None:
        if src != dst:
            self.ledgers[src].bytes_sent += nbytes
            self.ledgers[dst].bytes_received += nbytes

    def insert_build(self, dst: int, bucket: int, key: int, g: int,
                     code: int) -> None:
        led = self.ledgers[dst]
        led.build_inserted += 1
        cell = self.nodes[dst].cell(bucket, key)
        if cell[2]:
            led.result_count += cell[2]
            self.fp = (self.fp + g * cell[3]) % _FP_MOD
            if self.collect_pairs:
                for pc in self.nodes[dst].plists[bucket].get(key, ()):
                    self.pairs.append((code, pc))
        cell[0] += 1
        cell[1] = (cell[1] + g) % _FP_MOD
        if self.collect_pairs:
            self.nodes[dst].blists[bucket].setdefault(key, []).append(code)
        if bucket == _BH:
            subs = self.nodes[dst].subs.get(key)
            if subs:
                wire = self.cost.tuple_wire_bytes
                for j in subs:
                    self._wire(dst, j, wire)
                    if self.trace is not None:
                        self.trace.append({"kind": "forward", "src": dst,
                                           "dst": j, "key": key, "bytes": wire})
                    self.insert_build(j, _BPU, key, g, code)

    def bulk_insert(self, dst: int, bucket: int, key: int, cnt: int, gsum: int,
                    codes: list[int] | None) -> None:
        led = self.ledgers[dst]
        led.build_inserted += cnt
        cell = self.nodes[dst].cell(bucket, key)
        if cell[2]:
            led.result_count += cnt * cell[2]
            self.fp = (self.fp + gsum * cell[3]) % _FP_MOD
            if self.collect_pairs:
                for pc in self.nodes[dst].plists[bucket].get(key, ()):
                    for bc in codes:
                        self.pairs.append((bc, pc))
        cell[0] += cnt
        cell[1] = (cell[1] + gsum) % _FP_MOD
        if self.collect_pairs and codes:
            self.nodes[dst].blists[bucket].setdefault(key, []).extend(codes)

    def deliver_probe(self, dst: int, key: int, code: int, h: int,
                      view: tuple[int, ...], skew: bool) -> None:
        led = self.ledgers[dst]
        led.probe_processed += 1
        if skew:
            led.skewed_received += 1
        node = self.nodes[dst]
        fp = self.fp
        for bucket in view:
            cell = node.cell(bucket, key)
            if cell[0]:
                led.result_count += cell[0]
                fp = (fp + h * cell[1]) % _FP_MOD
                if self.collect_pairs:
                    for bc in node.blists[bucket].get(key, ()):
                        self.pairs.append((bc, code))
            cell[2] += 1
            cell[3] = (cell[3] + h) % _FP_MOD
            if self.collect_pairs:
                node.plists[bucket].setdefault(key, []).append(code)
        self.fp = fp

    def register_pull(self, j: int, key: int) -> None:
        """First skewed receipt of `key` at node j: pull the hash node's
        current builds for the key and subscribe to later arrivals."""
        q = self.hash_of(key)
        node = self.nodes[j]
        if key in node.pulled:
            return
        node.pulled.add(key)
        self._wire(j, q, self.cost.pull_request_bytes)
        if self.trace is not None:
            self.trace.append({"kind": "pull_reg", "src": j, "dst": q,
                               "key": key, "bytes": self.cost.pull_request_bytes})
        src_cell = self.nodes[q].buckets[_BH].get(key)
        if src_cell and src_cell[0]:
            cnt, gsum = src_cell[0], src_cell[1]
            nbytes = cnt * self.cost.tuple_wire_bytes
            self._wire(q, j, nbytes)
            codes = None
            if self.collect_pairs:
                codes = list(self.nodes[q].blists[_BH].get(key, ()))
            if self.trace is not None:
                self.trace.append({"kind": "pull_ship", "src": q, "dst": j,
                                   "key": key, "count": cnt, "bytes": nbytes})
            self.bulk_insert(j, _BPU, key, cnt, gsum, codes)
            self.pull_bytes += nbytes
        self.nodes[q].subs.setdefault(key, []).append(j)
        self.pull_count += 1

    # -- per-tuple processing --------------------------------------------------

    _VIEW_AT_Q = (_BH, _BS, _BQP, _BPU)
    _VIEW_REMOTE = (_BS, _BPU)

    def probe_view(self, dst: int, q: int, code: int, skew: bool) -> tuple[int, ...]:
        if self.strategy == "sfr" and skew:
            if dst == q:
                return (_BS, _BH)
            # column proxy: hash node if it sits in this column, else the
            # column's row-0 node
            cols = self._sfr_cols
            col_idx = mix64(code) % cols
            if q % cols == col_idx:
                return (_BS,)  # q is the proxy and dst != q
            if dst == col_idx:  # row-0 member of the column
                return (_BS, _BPU)
            return (_BS,)
        if dst == q:
            return self._VIEW_AT_Q
        return self._VIEW_REMOTE

    def wants_pull(self, dst: int, q: int, code: int) -> bool:
        if dst == q:
            return False
        if self.strategy == "bppr":
            return True
        if not self.repair:
            return False
        if self.strategy in ("prpd", "pnr"):
            return True
        # sfr: only the column's designated proxy may pull
        cols = self._sfr_cols
        col_idx = mix64(code) % cols
        if q % cols == col_idx:
            return False  # q itself is in the column and already holds builds
        return dst == col_idx

    def process_probe(self, t: Tuple, ctx, clf) -> None:
        key = t.key
        if self.mode == "online":
            clf.observe(key)
            self.ledgers[t.node].detector_observes += 1
        route = self._route(PROBE, t, ctx)
        skew = route.skew_path
        if skew:
            self.skew_classified += 1
        code = (t.node << 40) | t.seq
        h = probe_fp(code)
        wire = self.cost.tuple_wire_bytes
        q = self.hash_of(key)
        for dst in route.nodes:
            self._wire(t.node, dst, wire)
            if self.trace is not None:
                self.trace.append({"kind": "probe_deliver", "src": t.node,
                                   "dst": dst, "key": key, "rowid": code,
                                   "skew": skew,
                                   "bytes": wire if dst != t.node else 0})
            view = self.probe_view(dst, q, code, skew)
            self.deliver_probe(dst, key, code, h, view, skew)
            if skew and self.wants_pull(dst, q, code):
                self.register_pull(dst, key)
            if skew and self.strategy == "bppr" and self.trace is not None:
                state = ctx.bppr_state
                self.trace.append({"kind": "route", "origin": t.node,
                                   "dst": dst, "key": key, "rowid": code,
                                   "ulen": len(state.candidate_members(key))})

    def process_build(self, t: Tuple, ctx) -> None:
        route = self._route(BUILD, t, ctx)
        skew = route.skew_path
        code = (t.node << 40) | t.seq
        g = build_fp(code)
        wire = self.cost.tuple_wire_bytes
        dests = route.nodes
        bucket = _BS if skew else _BH
        for dst in dests:
            self._wire(t.node, dst, wire)
            if self.trace is not None:
                self.trace.append({"kind": "build_deliver", "src": t.node,
                                   "dst": dst, "key": t.key, "rowid": code,
                                   "bucket": bucket,
                                   "bytes": wire if dst != t.node else 0})
            self.insert_build(dst, bucket, t.key, g, code)
        if skew and self.strategy == "sfr" and self.repair:
            # keep the hash node complete for probes that were classified
            # non-skewed elsewhere; these copies never reach grid joins
            q = self.hash_of(t.key)
            if q not in dests:
                self._wire(t.node, q, wire)
                if self.trace is not None:
                    self.trace.append({"kind": "build_deliver", "src": t.node,
                                       "dst": q, "key": t.key, "rowid": code,
                                       "bucket": _BQP,
                                       "bytes": wire if q != t.node else 0})
                self.insert_build(q, _BQP, t.key, g, code)

    # -- top-level phases ------------------------------------------------------

    def make_classifiers(self) -> None:
        if self.mode == "oracle":
            skew = oracle_skew_keys(self.w, self.theta)
            self.classifiers = [OracleClassifier(skew) for _ in range(self.n)]
        elif self.mode == "online":
            self.classifiers = [
                OnlineClassifier(self.theta, self.capacity, self.warmup)
                for _ in range(self.n)
            ]
        elif self.mode == "twopass":
            self.run_detection_pass()
        else:
            raise ValueError(f"unknown detector mode {self.mode!r}")

    def run_detection_pass(self) -> None:
        sketches = [SkewSketch(self.capacity) for _ in range(self.n)]
        for i, shard in enumerate(self.w.probe_shards):
            sk = sketches[i]
            for t in shard:
                sk.observe(t.key)
            self.ledgers[i].detector_observes += len(shard)
            self.detect_phase_observes[i] = len(shard)
        resp = self.cluster.response_node
        merged = sketches[resp]
        for i in range(self.n):
            if i == resp:
                continue
            nbytes = SKETCH_RECORD_BYTES * len(sketches[i])
            self._wire(i, resp, nbytes)
            self.sketch_bytes[i] += nbytes
            self.sketch_bytes[resp] += nbytes
            if self.trace is not None:
                self.trace.append({"kind": "sketch", "src": i, "dst": resp,
                                   "bytes": nbytes})
            merged = merged.merge(sketches[i])
        skew = frozenset(
            k for k, c, _ in merged.items()
            if merged.n_seen >= self.warmup and c >= self.theta * merged.n_seen
        )
        self.classifiers = [FrozenClassifier(skew) for _ in range(self.n)]

    def run(self) -> SimReport:
        self.make_classifiers()
        self._route = ROUTES[self.strategy]
        # sfr geometry cached for view/pull decisions
        if self.strategy == "sfr":
            self._sfr_rows, self._sfr_cols = sfr_grid(self.n)
        else:
            self._sfr_rows, self._sfr_cols = 1, self.n
        self.contexts = [
            make_context(self.strategy, self.n, i, self.classifiers[i],
                         self.epsilon, recheck=self.recheck,
                         active_only=self.active_only)
            for i in range(self.n)
        ]

        streams = []
        for i in range(self.n):
            merged: list[Tuple] = []
            b, p = self.w.build_shards[i], self.w.probe_shards[i]
            for k in range(max(len(b), len(p))):
                if k < len(b):
                    merged.append(b[k])
                if k < len(p):
                    merged.append(p[k])
            streams.append(merged)

        longest = max(len(s) for s in streams)
        for step in range(longest):
            for i in range(self.n):
                s = streams[i]
                if step >= len(s):
                    continue
                t = s[step]
                if t.side == BUILD:
                    self.process_build(t, self.contexts[i])
                else:
                    self.process_probe(t, self.contexts[i], self.classifiers[i])

        resp = self.cluster.response_node
        for i in range(self.n):
            if i != resp:
                self._wire(i, resp, AGG_COUNT_BYTES)
                if self.trace is not None:
                    self.trace.append({"kind": "agg", "src": i, "dst": resp,
                                       "bytes": AGG_COUNT_BYTES})

        return self.finalize()

    def elapsed(self) -> tuple[float, dict[str, float]]:
        c = self.cost
        bw = c.bandwidth_mbps * 1e6
        if self.mode == "twopass":
            detect_phase = max(c.detect_cost * o for o in self.detect_phase_observes)
            merge_time = (self.sketch_bytes[self.cluster.response_node] * 8.0) / bw
            join_phase = 0.0
            for i, led in enumerate(self.ledgers):
                comm = (led.bytes_sent + led.bytes_received - self.sketch_bytes[i]) * 8.0 / bw
                work = c.c_build * led.build_inserted + c.c_probe * led.probe_processed
                if PROBE_WORK_INCLUDES_MATCHES:
                    work += c.c_probe * led.result_count
                join_phase = max(join_phase, comm + work)
            total = detect_phase + merge_time + join_phase
            return total, {"detect_phase_s": detect_phase,
                           "merge_s": merge_time, "join_phase_s": join_phase}
        worst = 0.0
        for led in self.ledgers:
            comm = (led.bytes_sent + led.bytes_received) * 8.0 / bw
            work = (c.c_build * led.build_inserted
                    + c.c_probe * led.probe_processed
                    + c.detect_cost * led.detector_observes)
            if PROBE_WORK_INCLUDES_MATCHES:
                work += c.c_probe * led.result_count
            worst = max(worst, comm + work)
        return worst, {}

    def finalize(self) -> SimReport:
        total_bytes = sum(l.bytes_sent for l in self.ledgers)
        assert total_bytes == sum(l.bytes_received for l in self.ledgers)
        elapsed, phases = self.elapsed()
        skew_vec = [l.skewed_received for l in self.ledgers]
        bal = balance_factor(skew_vec)
        diagnostics: dict[str, Any] = {
            "seed": self.w.cfg.seed,
            "epsilon": self.epsilon,
            "theta": self.theta,
            "capacity": self.capacity,
            "warmup": self.warmup,
            "result_fingerprint": self.fp,
            "skew_classified": self.skew_classified,
            "pull_count": self.pull_count,
            "pull_bytes": self.pull_bytes,
        }
        diagnostics.update(phases)
        if self.strategy == "bppr":
            hist: Counter[int] = Counter()
            for ctx in self.contexts:
                hist.update(ctx.bppr_state.u_sizes().values())
            diagnostics["u_size_histogram"] = dict(sorted(hist.items()))
            diagnostics["balance_excess"] = max(0.0, bal - self.epsilon)
            if self.trace is not None:
                diagnostics["candidate_sets"] = [
                    {key: ctx.bppr_state.candidate_members(key)
                     for key in ctx.bppr_state.u_sizes()}
                    for ctx in self.contexts
                ]
        report = SimReport(
            strategy=self.strategy,
            detector_mode=self.mode,
            n=self.n,
            ledgers=self.ledgers,
            total_result_count=sum(l.result_count for l in self.ledgers),
            total_network_bytes=total_bytes,
            elapsed_seconds=elapsed,
            global_balance_B=bal,
            diagnostics=diagnostics,
        )
        if self.collect_pairs:
            self.pairs.sort()
            report.diagnostics["pairs"] = self.pairs
        return report


def run(workload: Workload, strategy_name: str,
        cluster: ClusterSpec | None = None, cost: CostModel | None = None,
        detector_mode: str = "oracle", *, epsilon: float = 0.2,
        theta: float = 0.001, capacity: int = 256, warmup: int = 1000,
        recheck: bool = False, active_only: bool = False,
        trace: list | None = None, collect_pairs: bool = False) -> SimReport:
    """Execute one distributed join and return its report.

    `trace`, when given a list, accumulates delivery/pull/route events for
    independent verification. `collect_pairs` materializes the actual
    result pairs (small workloads only).
    """
    if strategy_name not in STRATEGY_NAMES:
        raise ValueError(f"unknown strategy {strategy_name!r}")
    if detector_mode not in DETECTOR_MODES:
        raise ValueError(f"unknown detector mode {detector_mode!r}")
    if cluster is None:
        cluster = ClusterSpec(workload.n_nodes)
    cluster.validate()
    if cluster.n != workload.n_nodes:
        raise ValueError("cluster size does not match workload shards")
    if cost is None:
        cost = CostModel()
    cost.validate()
    r = _Run(workload, strategy_name, cluster, cost, detector_mode, epsilon,
             theta, capacity, warmup, recheck, active_only, trace,
             collect_pairs)
    return r.run()
