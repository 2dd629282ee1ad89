"""Portable seeded randomness.

Fixtures must be reproducible across implementations, so the platform RNG is
not used.  The generator is xoshiro256** seeded by four successive splitmix64
outputs of the user seed.  Uniform doubles take the top 53 bits; Gaussian
variates come from the Box-Muller transform, consuming two uniforms and
yielding two normals (cosine branch first).  A standard complex Gaussian is
``(x + i y) / sqrt(2)`` with ``x`` and ``y`` taken in that order from the
normal stream; matrices are filled in row-major order.
"""
from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step; returns ``(new_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


class Xoshiro256:
    """xoshiro256** 1.0 with a Box-Muller normal stream."""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError("seed must be an unsigned integer")
        sm = seed & _MASK
        s = []
        for _ in range(4):
            sm, out = splitmix64(sm)
            s.append(out)
        self._s = s
        self._spare: float | None = None

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK, 7) * 9) & _MASK
        t = (s[1] << 17) & _MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def uniform(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def normal(self) -> float:
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        u1 = 1.0 - self.uniform()  # (0, 1], keeps log finite
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        self._spare = r * math.sin(2.0 * math.pi * u2)
        return r * math.cos(2.0 * math.pi * u2)

    def complex_normal(self, shape) -> np.ndarray:
        shape = (shape,) if isinstance(shape, int) else tuple(shape)
        n = int(np.prod(shape)) if shape else 1
        vals = np.empty(n, dtype=complex)
        for i in range(n):
            x = self.normal()
            y = self.normal()
            vals[i] = complex(x, y) / math.sqrt(2.0)
        return vals.reshape(shape)


def ginibre(rows: int, cols: int, gen: Xoshiro256) -> np.ndarray:
    return gen.complex_normal((rows, cols))


def _as_gen(seed_or_gen) -> Xoshiro256:
    if isinstance(seed_or_gen, Xoshiro256):
        return seed_or_gen
    return Xoshiro256(int(seed_or_gen))


def random_isometry(rows: int, cols: int, seed) -> np.ndarray:
    """Haar-distributed isometry (QR of a Ginibre matrix with phase fix)."""
    if cols > rows:
        raise ValueError("an isometry needs rows >= cols")
    q, r = np.linalg.qr(ginibre(rows, cols, _as_gen(seed)))
    d = np.diag(r)
    return q * np.where(np.abs(d) > 0, d / np.abs(d), 1.0)


def random_unitary(dim: int, seed) -> np.ndarray:
    return random_isometry(dim, dim, seed)


def random_unit_vector(dim: int, seed) -> np.ndarray:
    v = _as_gen(seed).complex_normal(dim)
    return v / np.linalg.norm(v)
