"""Seeded, platform-independent normal draws.

The generator is pinned so synthetic fixtures reproduce bit-for-bit in any
language:

* SplitMix64 (Steele, Lea & Flood 2014) produces 64-bit words.  State update
  ``s += 0x9E3779B97F4A7C15``; output ``z = s``, ``z = (z ^ (z >> 30)) *
  0xBF58476D1CE4E5B9``, ``z = (z ^ (z >> 27)) * 0x94D049BB133111EB``,
  ``z ^ (z >> 31)``, all modulo 2**64.  Seed 1234567 yields
  6457827717110365317, 3203168211198807973, 9817491932198370423, ...
* A uniform double in [0, 1) is ``(word >> 11) * 2**-53``.
* Box-Muller turns two uniforms ``u1, u2`` into ``r = sqrt(-2 ln(1 - u1))``,
  ``z0 = r cos(2 pi u2)``, ``z1 = r sin(2 pi u2)``; both are used, ``z0``
  first.  ``1 - u1`` lies in (0, 1], so the log is always finite.
"""
import math

__all__ = ["SplitMix64", "NormalStream"]

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = int(seed) & _MASK

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def next_double(self):
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)


class NormalStream:
    """Standard normal deviates via Box-Muller on a SplitMix64 stream."""

    def __init__(self, seed):
        self._rng = SplitMix64(seed)
        self._spare = None

    def standard_normal(self):
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        u1 = self._rng.next_double()
        u2 = self._rng.next_double()
        r = math.sqrt(-2.0 * math.log(1.0 - u1))
        theta = 2.0 * math.pi * u2
        self._spare = r * math.sin(theta)
        return r * math.cos(theta)

    def normal(self, mu, sigma, size):
        return [mu + sigma * self.standard_normal() for _ in range(size)]
