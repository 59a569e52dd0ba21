"""SplitMix64: the fixed, portable PRNG used by instance generators.

The algorithm identifier "splitmix64" is recorded inside generated instance
files so instances can be regenerated bit-identically by any implementation
of the same generator. Bounded draws use rejection sampling, which keeps the
mapping from raw 64-bit outputs to values exactly reproducible.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

ALGORITHM_ID = "splitmix64"


class SplitMix64:
    """Deterministic 64-bit generator (Steele, Lea and Flood's mixer)."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection below the largest multiple of n."""
        if n <= 0:
            raise ValueError(f"bound must be positive, got {n}")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n
