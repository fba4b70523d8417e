"""Seeded random number generation with a fixed, documented algorithm.

Scenario generation and stagnation perturbations must reproduce bit-identical
results across platforms and Python versions, so the generator is pinned here
rather than borrowed from ``random`` or numpy (whose stream algorithms are
not part of their compatibility promises).

State update (xoshiro256**, public domain, Blackman & Vigna):

    out = rotl64(s1 * 5, 7) * 9
    t = s1 << 17
    s2 ^= s0;  s3 ^= s1;  s1 ^= s2;  s0 ^= s3
    s2 ^= t
    s3 = rotl64(s3, 45)

seeded through splitmix64:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)

with all arithmetic modulo 2^64. Floats come from the top 53 bits:
``(out >> 11) * 2^-53``, giving uniforms in [0, 1).
"""

from __future__ import annotations

from .errors import ValidationError

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


def _splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: (output, next state)."""
    state = (state + _GOLDEN) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31), state


def derive_seed(seed: int, index: int) -> int:
    """Child seed for stream ``index``; two splitmix64 rounds so that nearby
    indices land far apart."""
    if index < 0:
        raise ValidationError("stream index must be non-negative", field="index")
    z, _ = _splitmix64(seed & _MASK64)
    z2, _ = _splitmix64((z ^ index) & _MASK64)
    return z2


class Rng:
    """xoshiro256** stream seeded via splitmix64."""

    __slots__ = ("_s",)

    def __init__(self, seed: int):
        state = seed & _MASK64
        s = []
        for _ in range(4):
            out, state = _splitmix64(state)
            s.append(out)
        self._s = s

    def next_u64(self) -> int:
        s = self._s
        out = (_rotl((s[1] * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return out

    def random(self) -> float:
        """Uniform in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lo: float, hi: float) -> float:
        """Uniform in [lo, hi)."""
        return lo + (hi - lo) * self.random()

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n). Bias of floor(u*n) is ~n/2^53, harmless
        at the small ranges used here."""
        if n <= 0:
            raise ValidationError("range must be positive", field="n")
        return int(self.random() * n)

    def unit_vector(self) -> tuple[float, float]:
        """Uniform direction, by rejection sampling inside the unit disk.

        Avoids trig so the result depends only on IEEE-exact operations.
        """
        while True:
            x = self.uniform(-1.0, 1.0)
            y = self.uniform(-1.0, 1.0)
            d2 = x * x + y * y
            if 1e-12 < d2 <= 1.0:
                d = d2**0.5
                return x / d, y / d
