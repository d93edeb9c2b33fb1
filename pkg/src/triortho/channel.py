"""Dephasing (phase-flip) channel sampling and syndrome extraction.

Random bits come from a counter-based generator, so a frame's error depends
only on ``(seed, frame_index)`` and frames can be drawn in any order or in
parallel. The stream for one frame is::

    mix(z) = splitmix64 finalizer:
        z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
        z ^= z >> 27; z *= 0x94D049BB133111EB
        z ^= z >> 31
    key    = mix(mix(seed) + GAMMA * (frame_index + 1))
    u_j    = mix(key + GAMMA * (j + 1))            j = 0 .. n-1
    e_j    = 1  iff  u_j < floor(p * 2**64)

with ``GAMMA = 0x9E3779B97F4A7C15`` and all arithmetic modulo 2**64. The
comparison against an integer threshold keeps sampling free of floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import gf2

GAMMA = 0x9E3779B97F4A7C15
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1


def mix64(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def threshold(p: float) -> int:
    """``floor(p * 2**64)``, computed exactly from the binary value of ``p``."""
    if not 0.0 <= p < 0.5:
        raise ValueError(f"dephasing probability must lie in [0, 1/2), got {p}")
    return int(Fraction(p) * (1 << 64))


@dataclass(frozen=True)
class ChannelConfig:
    p: float
    seed: int
    frame_index: int = 0

    def __post_init__(self):
        threshold(self.p)


def frame_keys(seed: int, frame_indices) -> np.ndarray:
    idx = np.asarray(frame_indices, dtype=np.uint64).reshape(-1)
    base = mix64(np.array([seed & _MASK], dtype=np.uint64))
    with np.errstate(over="ignore"):
        return mix64(base + np.uint64(GAMMA) * (idx + np.uint64(1)))


def sample_errors(p: float, seed: int, frame_indices, n: int) -> np.ndarray:
    """Errors for several frames at once, shape ``(len(frame_indices), n)``."""
    thr = np.uint64(threshold(p))
    keys = frame_keys(seed, frame_indices)
    offsets = np.uint64(GAMMA) * np.arange(1, n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        u = mix64(keys[:, None] + offsets[None, :])
    return (u < thr).astype(np.uint8)


def sample_error(cfg: ChannelConfig, n: int) -> np.ndarray:
    return sample_errors(cfg.p, cfg.seed, [cfg.frame_index], n)[0]


def syndrome(h_x, e) -> np.ndarray:
    """``H_X e`` for one error vector or a stack of them (one per row)."""
    h_x = gf2.as_bits(h_x, 2)
    e = gf2.as_bits(e)
    if e.shape[-1] != h_x.shape[1]:
        raise ValueError(f"dimension mismatch: h_x has {h_x.shape[1]} columns, error has length {e.shape[-1]}")
    return ((e.astype(np.int64) @ h_x.T.astype(np.int64)) & 1).astype(np.uint8)
