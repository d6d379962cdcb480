"""Deterministic 64-bit random stream used everywhere reproducibility matters.

The per-tree seed derivation is a fixed, bit-exact contract so that a
reimplementation in another language can reproduce every forest, corpus
and simulation byte for byte:

    mix(s, i) = splitmix64_finalize(s XOR (i + 1) * 0x9E3779B97F4A7C15)

All arithmetic is modulo 2**64.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64_finalize(z: int) -> int:
    """SplitMix64 avalanche finalizer (Steele/Lea constants)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def mix_seed(seed: int, index: int) -> int:
    """Derive the stream seed for sub-stream ``index`` of ``seed``."""
    return splitmix64_finalize((seed ^ ((index + 1) * _GOLDEN)) & _MASK64)


class SplitMix64:
    """Sequential SplitMix64 generator.

    Tiny, allocation-free and exactly reproducible; sufficient statistical
    quality for bootstrap sampling, feature subsetting and synthetic data.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return splitmix64_finalize(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.random()

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n). Modulo bias is negligible for n << 2**64."""
        if n <= 0:
            raise ValueError("randbelow requires n >= 1")
        return self.next_u64() % n

    def randint(self, low: int, high: int) -> int:
        """Uniform integer in [low, high], both ends inclusive."""
        return low + self.randbelow(high - low + 1)

    def normal(self, mu: float = 0.0, sigma: float = 1.0) -> float:
        """Gaussian deviate via Box-Muller (cosine branch only)."""
        u1 = (self.next_u64() >> 11) + 1  # in [1, 2**53], so log() is finite
        u2 = self.random()
        z = math.sqrt(-2.0 * math.log(u1 * (1.0 / (1 << 53)))) * math.cos(2.0 * math.pi * u2)
        return mu + sigma * z

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n), order randomized."""
        if k > n:
            raise ValueError("sample larger than population")
        pool = list(range(n))
        for i in range(k):
            j = i + self.randbelow(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def token_bytes(self, n: int) -> bytes:
        out = bytearray()
        while len(out) < n:
            out += self.next_u64().to_bytes(8, "big")
        return bytes(out[:n])
