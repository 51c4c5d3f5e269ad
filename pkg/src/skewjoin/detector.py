"""Per-node streaming heavy-hitter detection.

A SkewSketch is a Space Saving summary backed by a hash index plus an
array kept ordered by count, so observe() is O(1). Sketches from different
nodes can be merged for the two-pass detection baseline.

Three classifier flavors feed the routing layer:
  * OnlineClassifier  - one sketch per node, decisions latch per key
  * OracleClassifier  - exact probe-side frequencies thresholded by theta
  * FrozenClassifier  - a precomputed global skew set (two-pass mode)
"""

from __future__ import annotations

import csv

DEFAULT_THETA = 0.001
DEFAULT_CAPACITY = 256
DEFAULT_WARMUP = 1000


class SkewSketch:
    """Space Saving summary with at most `capacity` tracked keys.

    The tracked records live in parallel arrays sorted by count
    (non-increasing); `_group_start[c]` is the first array slot holding
    count c, so bumping a count is a single swap with the head of its
    count group. The minimum-count record is always the last slot.
    """

    __slots__ = ("capacity", "n_seen", "_keys", "_counts", "_overs", "_pos",
                 "_group_start")

    def __init__(self, capacity: int = DEFAULT_CAPACITY) -> None:
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.n_seen = 0
        self._keys: list[int] = []
        self._counts: list[int] = []
        self._overs: list[int] = []
        self._pos: dict[int, int] = {}
        self._group_start: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._keys)

    def observe(self, key: int) -> None:
        self.n_seen += 1
        pos = self._pos.get(key)
        if pos is not None:
            self._bump(pos)
        elif len(self._keys) < self.capacity:
            idx = len(self._keys)
            self._keys.append(key)
            self._counts.append(1)
            self._overs.append(0)
            self._pos[key] = idx
            self._group_start.setdefault(1, idx)
        else:
            # evict a minimum-count record; the new key inherits min as its
            # overestimation bound and enters with count min+1
            last = len(self._keys) - 1
            old_key = self._keys[last]
            min_count = self._counts[last]
            del self._pos[old_key]
            self._keys[last] = key
            self._overs[last] = min_count
            self._pos[key] = last
            self._bump(last)

    def _bump(self, i: int) -> None:
        c = self._counts[i]
        j = self._group_start[c]
        if j != i:
            ki, kj = self._keys[i], self._keys[j]
            self._keys[i], self._keys[j] = kj, ki
            self._overs[i], self._overs[j] = self._overs[j], self._overs[i]
            self._pos[ki], self._pos[kj] = j, i
        self._counts[j] = c + 1
        if j + 1 < len(self._counts) and self._counts[j + 1] == c:
            self._group_start[c] = j + 1
        else:
            del self._group_start[c]
        if c + 1 not in self._group_start:
            self._group_start[c + 1] = j

    def estimate(self, key: int) -> tuple[int, int] | None:
        """(estimated count, overestimation bound) or None if untracked."""
        pos = self._pos.get(key)
        if pos is None:
            return None
        return self._counts[pos], self._overs[pos]

    def is_skewed(self, key: int, theta: float, warmup: int) -> bool:
        """True iff past warm-up, tracked, and est >= theta * n_seen."""
        if self.n_seen < warmup:
            return False
        pos = self._pos.get(key)
        if pos is None:
            return False
        return self._counts[pos] >= theta * self.n_seen

    def items(self) -> list[tuple[int, int, int]]:
        """(key, est, overestimate) triples, highest count first."""
        return list(zip(self._keys, self._counts, self._overs))

    def merge(self, other: "SkewSketch") -> "SkewSketch":
        """Combine two sketches of equal capacity.

        Common keys have counts and overestimates summed; the union is then
        cut back to the top `capacity` records by count.
        """
        if self.capacity != other.capacity:
            raise ValueError(
                f"capacity mismatch: {self.capacity} vs {other.capacity}"
            )
        combined: dict[int, tuple[int, int]] = {
            k: (c, o) for k, c, o in self.items()
        }
        for k, c, o in other.items():
            if k in combined:
                c0, o0 = combined[k]
                combined[k] = (c0 + c, o0 + o)
            else:
                combined[k] = (c, o)
        ranked = sorted(combined.items(), key=lambda kv: (-kv[1][0], kv[0]))
        out = SkewSketch(self.capacity)
        out.n_seen = self.n_seen + other.n_seen
        for idx, (k, (c, o)) in enumerate(ranked[: self.capacity]):
            out._keys.append(k)
            out._counts.append(c)
            out._overs.append(o)
            out._pos[k] = idx
            out._group_start.setdefault(c, idx)
        return out

    def dump_csv(self, path: str) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["key", "est", "overestimate"])
            for row in self.items():
                w.writerow(row)


# ---------------------------------------------------------------------------
# Classifiers
# ---------------------------------------------------------------------------

class OnlineClassifier:
    """Single-pass per-node detector. A key reported skewed once stays
    skewed on this node for the rest of the run."""

    __slots__ = ("sketch", "theta", "warmup", "latched", "observes")

    def __init__(self, theta: float = DEFAULT_THETA,
                 capacity: int = DEFAULT_CAPACITY,
                 warmup: int = DEFAULT_WARMUP) -> None:
        self.sketch = SkewSketch(capacity)
        self.theta = theta
        self.warmup = warmup
        self.latched: set[int] = set()
        self.observes = 0

    def observe(self, key: int) -> None:
        self.observes += 1
        self.sketch.observe(key)

    def is_skewed(self, key: int) -> bool:
        if key in self.latched:
            return True
        if self.sketch.is_skewed(key, self.theta, self.warmup):
            self.latched.add(key)
            return True
        return False


class OracleClassifier:
    """Skew set computed from exact probe frequencies; no stream cost."""

    __slots__ = ("skew_keys", "observes")

    def __init__(self, skew_keys: frozenset[int]) -> None:
        self.skew_keys = skew_keys
        self.observes = 0

    def observe(self, key: int) -> None:  # pragma: no cover - no-op
        pass

    def is_skewed(self, key: int) -> bool:
        return key in self.skew_keys


class FrozenClassifier:
    """Fixed global skew set, e.g. from a merged detection pass."""

    __slots__ = ("skew_keys", "observes")

    def __init__(self, skew_keys: frozenset[int]) -> None:
        self.skew_keys = skew_keys
        self.observes = 0

    def observe(self, key: int) -> None:  # pragma: no cover - no-op
        pass

    def is_skewed(self, key: int) -> bool:
        return key in self.skew_keys


class NeverSkewedClassifier:
    """Degenerate classifier: nothing is skewed (pure hash routing)."""

    __slots__ = ("observes",)

    def __init__(self) -> None:
        self.observes = 0

    def observe(self, key: int) -> None:  # pragma: no cover - no-op
        pass

    def is_skewed(self, key: int) -> bool:
        return False
