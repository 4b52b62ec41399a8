"""Seeded, platform-independent randomness for experiments.

Every randomized operation in this package (graph sampling, ordering
shuffles, random game play, annealing) draws from :class:`SplitMix64`.
The algorithm is fully specified here so results are reproducible from a
seed on any platform and Python version: the 64-bit state advances by
0x9E3779B97F4A7C15 per draw and the output is finalized with two
xor-shift/multiply rounds (the splitmix64 finalizer).
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit generator."""

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def unit(self) -> float:
        """Float in [0, 1) built from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), rejection-sampled to avoid modulo bias."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        limit = (_MASK + 1) - ((_MASK + 1) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends included."""
        return lo + self.below(hi - lo + 1)

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def permutation(self, n: int) -> list[int]:
        items = list(range(n))
        self.shuffle(items)
        return items

    def choice(self, items):
        return items[self.below(len(items))]

    def sample(self, n: int, k: int) -> list[int]:
        """k distinct integers drawn from range(n), in random order."""
        if k > n:
            raise ValueError("sample size exceeds population")
        items = self.permutation(n)
        return items[:k]
