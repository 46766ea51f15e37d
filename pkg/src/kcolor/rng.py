"""Deterministic, splittable pseudorandom streams for the search algorithms.

The generator is a SplitMix64 counter: 8 bytes of state, one mix per draw.
It is deliberately tiny so the exact same arithmetic can be replicated
inside compiled kernels, keeping Python-level orchestration and kernel-level
tie-breaking on a single reproducible stream.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_SPLIT_SALT = 0x5851F42D4C957F2D


def mix64(x: int) -> int:
    """One SplitMix64 output step applied to ``x`` (finalizer only)."""
    z = x & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def seed_for(base_seed: int, index: int) -> int:
    """Derive a documented per-index child seed from a base seed.

    Used by the experiment harness so that trial ``i`` gets the stream
    ``seed_for(base_seed, i)`` whether trials run sequentially or in
    parallel.
    """
    return mix64((base_seed + index * _GAMMA) & _MASK64)


class SearchRng:
    """Seeded 64-bit stream, splittable into independent child streams.

    Same seed gives the same draw sequence on every run of the same build.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        return mix64(self.state)

    def randbelow(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` via unbiased mask-and-reject."""
        if n <= 0:
            raise ValueError("n must be positive")
        if n == 1:
            return 0
        mask = n - 1
        mask |= mask >> 1
        mask |= mask >> 2
        mask |= mask >> 4
        mask |= mask >> 8
        mask |= mask >> 16
        mask |= mask >> 32
        while True:
            r = self.next_u64() & mask
            if r < n:
                return r

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0**-53)

    def split(self) -> "SearchRng":
        """Child stream decorrelated from this one; advances this stream."""
        return SearchRng(mix64(self.next_u64() ^ _SPLIT_SALT))

    def __repr__(self) -> str:
        return f"SearchRng(state=0x{self.state:016x})"
