"""splitmix64: a tiny, fully specified generator for reproducible sampling.

state ← state + 0x9E3779B97F4A7C15 (mod 2⁶⁴)
z ← state
z ← (z ⊕ (z ≫ 30)) · 0xBF58476D1CE4E5B9 (mod 2⁶⁴)
z ← (z ⊕ (z ≫ 27)) · 0x94D049BB133111EB (mod 2⁶⁴)
output z ⊕ (z ≫ 31)

``below(n)`` uses rejection sampling so every residue is equally likely.
"""
from __future__ import annotations

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next()
            if x < limit:
                return x % n
