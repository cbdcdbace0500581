"""Counter-based Gaussian generator.

Each variate is a pure function of (seed, sample_index, mode_index) via
SplitMix64-style mixing and Box-Muller, so the draw is independent of mode
enumeration order, evaluation order, and any parallel schedule.
"""

from __future__ import annotations

import numpy as np

_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_SAMPLE_STRIDE = np.uint64(0xD1342543DE82EF95)
_MODE_STRIDE = np.uint64(0xAF251AF3B0F025B5)
_SALT = np.uint64(0x94D049BB133111EB)

_INV53 = float(2.0**-53)


def _finalize(z: np.ndarray) -> np.ndarray:
    z = (z + _GOLDEN).astype(np.uint64)
    z ^= z >> np.uint64(30)
    z *= _MIX1
    z ^= z >> np.uint64(27)
    z *= _MIX2
    z ^= z >> np.uint64(31)
    return z


def _keys(seed: int, sample_indices, n_modes: int):
    samples = np.asarray(sample_indices, dtype=np.uint64).reshape(-1, 1)
    modes = np.arange(n_modes, dtype=np.uint64).reshape(1, -1)
    with np.errstate(over="ignore"):
        base = _finalize(np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF))
        key = _finalize(base ^ (samples * _SAMPLE_STRIDE))
        key = _finalize(key ^ (modes * _MODE_STRIDE))
        return _finalize(key), _finalize(key ^ _SALT)


def gaussian_matrix(seed: int, sample_indices, n_modes: int) -> np.ndarray:
    """Standard-normal draws of shape (len(sample_indices), n_modes)."""
    h1, h2 = _keys(seed, sample_indices, n_modes)
    u1 = ((h1 >> np.uint64(11)) + np.uint64(1)).astype(float) * _INV53  # (0, 1]
    u2 = (h2 >> np.uint64(11)).astype(float) * _INV53                   # [0, 1)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def uniform_matrix(seed: int, sample_indices, n_modes: int) -> np.ndarray:
    """Uniform [0, 1) draws with the same counter-based keying."""
    h1, _ = _keys(seed, sample_indices, n_modes)
    return (h1 >> np.uint64(11)).astype(float) * _INV53
