"""Shared 64-bit hashing and PRNG primitives.

Everything downstream (workload generation, hash routing, candidate node
sequences) goes through the same splitmix64 mixer so that a run is a pure
function of its seed.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

# splitmix64 constants
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_A = 0xBF58476D1CE4E5B9
MIX_B = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """splitmix64 finalizer: xor-shift/multiply mix of a 64-bit value."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * MIX_A) & MASK64
    x = ((x ^ (x >> 27)) * MIX_B) & MASK64
    return (x ^ (x >> 31)) & MASK64


def hash_node(key: int, n: int) -> int:
    """Default hash placement of a join key on an n-node cluster."""
    return mix64(key) % n


class SplitMix64:
    """Sequential splitmix64 stream: state advances by the golden gamma,
    outputs are the mixed state."""

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN_GAMMA) & MASK64
        return mix64(self._state)

    def next_float(self) -> float:
        # 53-bit mantissa draw in [0, 1)
        return (self.next_u64() >> 11) * 2.0**-53

    def next_below(self, n: int) -> int:
        return self.next_u64() % n


def splitmix64_array(seed: int, count: int) -> np.ndarray:
    """Vectorized equivalent of `count` successive SplitMix64(seed) outputs."""
    idx = np.arange(1, count + 1, dtype=np.uint64)
    x = (np.uint64(seed & MASK64) + idx * np.uint64(GOLDEN_GAMMA)).astype(np.uint64)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(MIX_A)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(MIX_B)
    return x ^ (x >> np.uint64(31))


def uniform_floats(seed: int, count: int) -> np.ndarray:
    """Vector of floats in [0, 1) from the splitmix64 stream."""
    return (splitmix64_array(seed, count) >> np.uint64(11)) * 2.0**-53


def substream_seed(seed: int, tag: int) -> int:
    """Derive an independent stream seed for a named purpose."""
    return mix64((seed ^ tag) & MASK64)
