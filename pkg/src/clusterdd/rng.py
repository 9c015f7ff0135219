"""Pinned 64-bit pseudo random generator.

Instances and k-means seeding must be byte-reproducible across runs and
platforms, so we do not rely on ``random`` or numpy's bit generators whose
streams may change between releases.  The generator is xorshift64* (Vigna,
2014) with the user seed expanded through one round of splitmix64 so that
seed 0 is valid.
"""

MASK64 = (1 << 64) - 1
_XS_MULT = 0x2545F4914F6CDD1D


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class XorShift64Star:
    """xorshift64* generator: 64-bit state, 64-bit output."""

    def __init__(self, seed: int = 0):
        state = splitmix64(seed & MASK64)
        # xorshift has a single absorbing state at zero
        self._state = state or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self._state = x
        return (x * _XS_MULT) & MASK64

    def random(self) -> float:
        """Uniform double in [0, 1) built from the top 53 output bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        return int(self.random() * n)
