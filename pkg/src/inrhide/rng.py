"""Deterministic 64-bit random stream used for key-seeded weight generation.

Recovery of hidden images depends on regenerating the exact same weight
tensors from a 64-bit seed, so this generator is part of the wire format:
splitmix64 derives per-layer sub-seeds, xorshift64* produces uniforms, and
a Box-Muller transform turns uniform pairs into normals in a fixed order.
Any change here breaks every previously issued key, hence the version
suffix in STREAM_ID.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1

# Identifies the exact generation pipeline; stored inside key files.
STREAM_ID = "splitmix64/xorshift64star/box-muller/v1"

_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_XORSHIFT_FALLBACK_STATE = 0x9E3779B97F4A7C15  # xorshift state must be nonzero


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state once; return (output, new_state)."""
    state = (state + _SPLITMIX_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64, state


def mix_seed(seed: int, index: int) -> int:
    """Derive the index-th sub-seed of the splitmix64 stream rooted at seed."""
    state = seed & MASK64
    out = 0
    for _ in range(index + 1):
        out, state = splitmix64(state)
    return out


class XorShift64Star:
    """xorshift64* generator: 64-bit shift-register core, multiplicative output."""

    def __init__(self, seed: int):
        self.state = (seed & MASK64) or _XORSHIFT_FALLBACK_STATE

    def next_u64(self) -> int:
        s = self.state
        s ^= (s >> 12)
        s = (s ^ (s << 25)) & MASK64
        s ^= (s >> 27)
        self.state = s
        return (s * 0x2545F4914F6CDD1D) & MASK64

    def uniforms(self, n: int) -> np.ndarray:
        """n doubles in [0, 1), 53-bit resolution, in stream order."""
        raw = np.empty(n, dtype=np.uint64)
        s = self.state
        for i in range(n):
            s ^= s >> 12
            s = (s ^ (s << 25)) & MASK64
            s ^= s >> 27
            raw[i] = (s * 0x2545F4914F6CDD1D) & MASK64
        self.state = s
        return (raw >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def normals(seed: int, n: int) -> np.ndarray:
    """n standard normals from the xorshift64* stream rooted at seed.

    Box-Muller consumes uniform pairs (u1, u2) in stream order and emits
    both transform outputs (cos first, then sin) before the next pair, so
    the mapping from seed to the k-th normal is fixed for all time.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return np.empty(0, dtype=np.float64)
    pairs = (n + 1) // 2
    u = XorShift64Star(seed).uniforms(2 * pairs)
    u1 = u[0::2]
    u2 = u[1::2]
    # 1 - u1 lies in (0, 1], so the log never sees zero
    r = np.sqrt(-2.0 * np.log1p(-u1))
    theta = (2.0 * math.pi) * u2
    out = np.empty(2 * pairs, dtype=np.float64)
    out[0::2] = r * np.cos(theta)
    out[1::2] = r * np.sin(theta)
    return out[:n]
