"""Portable deterministic random generator with a fixed Gaussian transform.

The generator is splitmix64 (Steele, Lea & Flood's finalizer constants) and
the Gaussian transform is the trigonometric Box-Muller form, both pinned
byte-for-byte so reimplementations in other languages can replay identical
streams. Algorithm text and frozen test vectors live in
docs/portable-rng.md; tests/test_rng.py asserts them.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_TWO_POW_MINUS_53 = 2.0**-53


def mix64(z: int) -> int:
    """The splitmix64 output finalizer over a 64-bit state word."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class PortableRng:
    """splitmix64 stream: state advances by the 64-bit golden gamma per draw."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return mix64(self._state)

    def next_double(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits of one u64 draw."""
        return (self.next_u64() >> 11) * _TWO_POW_MINUS_53

    def uniform(self, low: float, high: float) -> float:
        return low + self.next_double() * (high - low)

    def next_gaussian_pair(self) -> tuple[float, float]:
        """One standard-normal pair via Box-Muller from exactly two u64 draws.

        u1 is shifted into (0, 1] so the log never sees zero; the cos
        component is first, then sin.
        """
        u1 = ((self.next_u64() >> 11) + 1) * _TWO_POW_MINUS_53
        u2 = (self.next_u64() >> 11) * _TWO_POW_MINUS_53
        radius = math.sqrt(-2.0 * math.log(u1))
        theta = math.tau * u2
        return radius * math.cos(theta), radius * math.sin(theta)


def derive_seed(master_seed: int, label: str) -> int:
    """Stable sub-stream seed for a labelled cell of an experiment.

    FNV-1a over the label's UTF-8 bytes, xored with the master seed and run
    through the splitmix64 finalizer. Independent of the order cells are
    visited in, so parallel execution cannot change any stream.
    """
    h = 0xCBF29CE484222325
    for byte in label.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & _MASK64
    return mix64((master_seed ^ h) & _MASK64)
