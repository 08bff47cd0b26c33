"""Portable seedable random streams.

Generator: xorshift64* (Vigna 2016) -- state update
``x ^= x >> 12; x ^= x << 25; x ^= x >> 27`` and output
``x * 0x2545F4914F6CDD1D mod 2**64``; uniform doubles take the top 53 bits.

Seeding and per-trial substreams use the SplitMix64 finalizer:
the stream for ``(seed, trial)`` starts from
``splitmix64(seed XOR (trial * 0x9E3779B97F4A7C15 mod 2**64))``.
All arithmetic is on Python integers, so streams are identical on every
platform.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MULT = 0x2545F4914F6CDD1D


def splitmix64(x: int) -> int:
    z = (x + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class XorShift64Star:
    def __init__(self, seed: int):
        if not 0 <= seed <= MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        state = splitmix64(seed)
        self._state = state or _GOLDEN  # the all-zero state is a fixed point

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self._state = x
        return (x * _MULT) & MASK64

    def random(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, size: int) -> list[float]:
        return [self.random() for _ in range(size)]


def prng_stream(seed: int) -> XorShift64Star:
    return XorShift64Star(seed)


def trial_stream(seed: int, trial: int) -> XorShift64Star:
    return XorShift64Star((seed ^ ((trial * _GOLDEN) & MASK64)) & MASK64)
