"""The five redistribution strategies behind one routing interface.

Each strategy maps (side, tuple, per-node context) to a destination set:

  grahj  - hash partition both sides
  prpd   - skewed probes stay local, skewed-key builds broadcast
  sfr    - skewed tuples replicated along rows/columns of a node grid
  pnr    - skewed probes round-robin scattered, skewed-key builds broadcast
  bppr   - skewed probes balanced within a per-key candidate set; builds
           always hash-partitioned (replication happens later on demand)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .bppr import BpprState
from .datagen import BUILD, Tuple, rowid_code
from .rng import hash_node, mix64

STRATEGY_NAMES = ("grahj", "prpd", "sfr", "pnr", "bppr")


class Destinations(NamedTuple):
    nodes: tuple[int, ...]
    replicate: bool = False  # True: deliver to all nodes; False: single target
    skew_path: bool = False


@dataclass
class RoutingContext:
    n: int
    origin: int
    classifier: object
    bppr_state: BpprState | None = None
    sfr_rows: int = 1
    sfr_cols: int = 1
    pnr_cursors: dict[int, int] = field(default_factory=dict)
    _q_cache: dict[int, int] = field(default_factory=dict)
    _dest_cache: dict[int, Destinations] = field(default_factory=dict)

    def hash_node(self, key: int) -> int:
        q = self._q_cache.get(key)
        if q is None:
            q = hash_node(key, self.n)
            self._q_cache[key] = q
        return q

    def hash_dest(self, key: int) -> Destinations:
        d = self._dest_cache.get(key)
        if d is None:
            d = Destinations((self.hash_node(key),))
            self._dest_cache[key] = d
        return d


def sfr_grid(n: int) -> tuple[int, int]:
    """Factor n into r x c with r <= c, r the largest divisor <= sqrt(n)."""
    r = 1
    d = 1
    while d * d <= n:
        if n % d == 0:
            r = d
        d += 1
    return r, n // r


def sfr_row_nodes(row: int, cols: int) -> tuple[int, ...]:
    return tuple(row * cols + c for c in range(cols))


def sfr_col_nodes(col: int, rows: int, cols: int) -> tuple[int, ...]:
    return tuple(r * cols + col for r in range(rows))


def make_context(strategy: str, n: int, origin: int, classifier,
                 epsilon: float = 0.2, *, recheck: bool = False,
                 active_only: bool = False) -> RoutingContext:
    if strategy not in STRATEGY_NAMES:
        raise ValueError(f"unknown strategy {strategy!r}")
    ctx = RoutingContext(n=n, origin=origin, classifier=classifier)
    if strategy == "bppr":
        ctx.bppr_state = BpprState(n, epsilon, recheck=recheck,
                                   active_only=active_only)
    elif strategy == "sfr":
        ctx.sfr_rows, ctx.sfr_cols = sfr_grid(n)
    return ctx


def route_grahj(side: int, t: Tuple, ctx: RoutingContext) -> Destinations:
    return ctx.hash_dest(t.key)


def route_prpd(side: int, t: Tuple, ctx: RoutingContext) -> Destinations:
    if ctx.classifier.is_skewed(t.key):
        if side == BUILD:
            return Destinations(tuple(range(ctx.n)), replicate=True, skew_path=True)
        return Destinations((ctx.origin,), skew_path=True)  # kept local
    return ctx.hash_dest(t.key)


def route_sfr(side: int, t: Tuple, ctx: RoutingContext) -> Destinations:
    if ctx.classifier.is_skewed(t.key):
        code = mix64(rowid_code(t))
        if side == BUILD:
            row = code % ctx.sfr_rows
            return Destinations(sfr_row_nodes(row, ctx.sfr_cols),
                                replicate=True, skew_path=True)
        col = code % ctx.sfr_cols
        return Destinations(sfr_col_nodes(col, ctx.sfr_rows, ctx.sfr_cols),
                            replicate=True, skew_path=True)
    return ctx.hash_dest(t.key)


def route_pnr(side: int, t: Tuple, ctx: RoutingContext) -> Destinations:
    if ctx.classifier.is_skewed(t.key):
        if side == BUILD:
            return Destinations(tuple(range(ctx.n)), replicate=True, skew_path=True)
        cursor = ctx.pnr_cursors.get(t.key, 0)
        ctx.pnr_cursors[t.key] = (cursor + 1) % ctx.n
        return Destinations((cursor,), skew_path=True)
    return ctx.hash_dest(t.key)


def route_bppr(side: int, t: Tuple, ctx: RoutingContext) -> Destinations:
    if side == BUILD:
        # deferred build partitioning: builds always go to their hash node
        return ctx.hash_dest(t.key)
    if ctx.classifier.is_skewed(t.key):
        return Destinations((ctx.bppr_state.route_skewed(t.key),), skew_path=True)
    return ctx.hash_dest(t.key)


ROUTES = {
    "grahj": route_grahj,
    "prpd": route_prpd,
    "sfr": route_sfr,
    "pnr": route_pnr,
    "bppr": route_bppr,
}
