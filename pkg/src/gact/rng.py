"""SplitMix64 pseudo-random generator.

All benchmark drivers draw their values from this generator so that the
same seed produces the same value sequence in any reimplementation.
The algorithm is the published SplitMix64: the state advances by the
64-bit golden-gamma increment and the output is the standard
30/27/31-shift multiply mix.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# Largest value the benchmark value mapping can produce; drivers need
# "positive integers", so outputs map into [1, 2**31).
POSITIVE_RANGE = (1 << 31) - 1


class SplitMix64:
    """64-bit SplitMix generator with the published mixing constants."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return (z ^ (z >> 31)) & _MASK

    def next_positive(self) -> int:
        """A positive integer in [1, 2**31), as the benchmarks require."""
        return (self.next_u64() % POSITIVE_RANGE) + 1

    def next_below(self, n: int) -> int:
        """Uniform-ish choice in [0, n); used for seeded scheduling picks."""
        if n <= 0:
            raise ValueError("n must be positive")
        return self.next_u64() % n


def positive_sequence(seed: int, count: int) -> list[int]:
    rng = SplitMix64(seed)
    return [rng.next_positive() for _ in range(count)]
