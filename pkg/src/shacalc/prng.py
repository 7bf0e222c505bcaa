"""SplitMix64: the pseudo-random generator behind every seeded suite.

SplitMix64 (Steele, Lea, Flood; used as the seeder of xoroshiro) is chosen
because it is tiny, fast, and fully specified by a handful of 64-bit
operations, so identical seeds reproduce identical suites on any platform
and any Python version.  Counterexamples reported by `shacalc verify` can
therefore be replayed anywhere from the seed and instance index alone.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit generator.  Draws are derived by modular
    reduction; the tiny modulo bias is irrelevant for test-instance
    sampling and keeps the algorithm exactly portable."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return (z ^ (z >> 31)) & _MASK

    def randrange(self, n: int) -> int:
        """Integer in [0, n)."""
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        return self.next_u64() % n

    def randint(self, a: int, b: int) -> int:
        """Integer in [a, b] inclusive."""
        return a + self.randrange(b - a + 1)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def spawn(self) -> "SplitMix64":
        """Independent child stream (for per-instance reproducibility)."""
        return SplitMix64(self.next_u64())
