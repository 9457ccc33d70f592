"""Seeded deterministic random numbers for parameter initialization.

The generator is a 64-bit xorshift* (shifts 12/25/27, multiplier
0x2545F4914F6CDD1D). It is pinned here, rather than delegating to numpy,
so that initial weights are reproducible bit-for-bit across platforms and
library versions.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_MULTIPLIER = 0x2545F4914F6CDD1D
# Substitute state for seed 0; xorshift has a fixed point at zero.
_ZERO_SEED_STATE = 0x9E3779B97F4A7C15


class XorShift64Star:
    """Deterministic 64-bit xorshift* stream."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64
        if self._state == 0:
            self._state = _ZERO_SEED_STATE

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK64
        x ^= x >> 27
        self._state = x
        return (x * _MULTIPLIER) & _MASK64

    def next_float(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def next_uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.next_float()
