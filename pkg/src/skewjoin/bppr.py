"""Coordination-free balanced routing of skewed probe tuples.

Every data node derives, for each skewed key, the same deterministic
candidate-node sequence from a shared hash, and grows a prefix of it (the
candidate set) only when its own per-target load balance degrades past the
configured threshold. No cross-node communication is involved; the balance
check runs in O(1) via cached load extrema.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .rng import MASK64, mix64


def balance_factor(loads) -> float:
    """(max - min) / max over the load vector; 0 when max is 0."""
    if len(loads) == 0:
        raise ValueError("balance_factor of an empty load vector")
    mx = max(loads)
    if mx == 0:
        return 0.0
    return (mx - min(loads)) / mx


@dataclass
class NodeSeq:
    """Deterministic candidate-node order for one key; nodes[0] is always
    the key's default hash node."""
    key: int
    nodes: list[int] = field(default_factory=list)


@dataclass
class CandidateSet:
    """Prefix of the key's NodeSeq currently eligible to receive its
    skewed probe tuples."""
    key: int
    members: list[int] = field(default_factory=list)


def gen_seq(key: int, seq: NodeSeq, n: int) -> NodeSeq:
    """Append the next candidate node to `seq` (no-op once it has n).

    Candidates come from hash(key + epoch) mod n with a wrapping 64-bit
    add, incrementing epoch past duplicates, so every node derives the
    identical sequence independently.
    """
    if len(seq.nodes) < n:
        epoch = len(seq.nodes)
        candidate = mix64((key + epoch) & MASK64) % n
        while candidate in seq.nodes:
            epoch += 1
            candidate = mix64((key + epoch) & MASK64) % n
        seq.nodes.append(candidate)
    return seq


def update_u(key: int, u: CandidateSet, seq: NodeSeq, n: int) -> CandidateSet:
    """Grow the candidate set by one node along the shared sequence."""
    size = len(u.members)
    gen_seq(key, seq, n)
    if size == len(seq.nodes):
        return u
    u.members.append(seq.nodes[size])
    return u


class _KeyState:
    __slots__ = ("seq", "u", "last")

    def __init__(self, key: int) -> None:
        self.seq = NodeSeq(key)
        self.u = CandidateSet(key)
        self.last = -1


class BpprState:
    """Per-data-node routing state for skewed probe tuples.

    `loads[j]` counts the skewed tuples this data node has sent to compute
    node j. A histogram of load values keeps the max/min (and therefore
    the local balance factor) updatable in constant time per routed tuple,
    including the tentative what-if check, without touching the vector.

    `recheck` enables expansion when even the least-loaded candidate fails
    the balance test (not only when it coincides with the previous
    choice). `active_only` restricts the balance factor to nonzero loads
    instead of all n partitions; both knobs exist for experimentation and
    default to the behavior the rest of the artifact assumes.
    """

    def __init__(self, n: int, epsilon: float, *, recheck: bool = False,
                 active_only: bool = False) -> None:
        if n < 1:
            raise ValueError("n must be >= 1")
        if not (0.0 < epsilon <= 1.0):
            raise ValueError("epsilon must be in (0, 1]")
        self.n = n
        self.epsilon = epsilon
        self.recheck = recheck
        self.active_only = active_only
        self.loads = [0] * n
        self.routed = 0
        self.ops = 0  # elementary-step counter for complexity checks
        self._keys: dict[int, _KeyState] = {}
        self._hist: dict[int, int] = {0: n}
        self._max = 0
        self._min = 0

    # -- cached-extrema bookkeeping -----------------------------------------

    def _bf_after(self, node: int) -> float:
        """Balance factor if one tuple were added to `node` (pure arithmetic,
        no mutation)."""
        v = self.loads[node]
        new_max = v + 1 if v + 1 > self._max else self._max
        if self.active_only:
            return self._bf_active(node, v, new_max)
        if v == self._min and self._hist[v] == 1:
            new_min = v + 1
        else:
            new_min = self._min
        if new_max == 0:
            return 0.0
        return (new_max - new_min) / new_max

    def _bf_active(self, node: int, v: int, new_max: int) -> float:
        # variant scope: only partitions already holding load
        nonzero = [x for x in self._hist if x > 0]
        if v == 0:
            nonzero.append(v + 1)
            mn = min(nonzero)
        else:
            mn = self._min_nonzero_after(v, nonzero)
        return 0.0 if new_max == 0 else (new_max - mn) / new_max

    def _min_nonzero_after(self, v: int, nonzero: list[int]) -> int:
        mn = min(nonzero)
        if v == mn and self._hist[v] == 1 and (v + 1) not in self._hist:
            rest = [x for x in nonzero if x != v]
            rest.append(v + 1)
            return min(rest)
        return min(mn, v + 1)

    def _commit(self, node: int) -> None:
        v = self.loads[node]
        self.loads[node] = v + 1
        h = self._hist
        if h[v] == 1:
            del h[v]
        else:
            h[v] -= 1
        h[v + 1] = h.get(v + 1, 0) + 1
        if v + 1 > self._max:
            self._max = v + 1
        if v == self._min and v not in h:
            self._min = v + 1
        self.routed += 1

    # -- routing -------------------------------------------------------------

    def route_skewed(self, key: int) -> int:
        """Pick the compute node for one skewed probe tuple of `key`."""
        self.ops += 1
        st = self._keys.get(key)
        if st is None:
            st = _KeyState(key)
            gen_seq(key, st.seq, self.n)
            st.u.members.append(st.seq.nodes[0])
            self._keys[key] = st
            target = st.seq.nodes[0]  # default hash node
            self.ops += 1
            self._commit(target)
            st.last = target
            return target

        last = st.last
        self.ops += 1
        if self._bf_after(last) <= self.epsilon:
            target = last
        else:
            members = st.u.members
            self.ops += len(members)
            target = members[0]
            best = self.loads[target]
            for m in members[1:]:
                lm = self.loads[m]
                if lm < best or (lm == best and m < target):
                    target, best = m, lm
            if target == last or (self.recheck and self._bf_after(target) > self.epsilon):
                if len(members) < self.n:
                    self.ops += self.n
                    update_u(key, st.u, st.seq, self.n)
                    target = st.u.members[-1]
                # at |U| == n there is nothing left to expand; keep the
                # least-loaded member
        self._commit(target)
        st.last = target
        return target

    def local_balance(self) -> float:
        return balance_factor(self.loads)

    # -- introspection for diagnostics and tests -----------------------------

    def candidate_members(self, key: int) -> list[int]:
        st = self._keys.get(key)
        return list(st.u.members) if st else []

    def u_sizes(self) -> dict[int, int]:
        return {key: len(st.u.members) for key, st in self._keys.items()}

    def extrema_consistent(self) -> bool:
        return self._max == max(self.loads) and self._min == min(self.loads)
