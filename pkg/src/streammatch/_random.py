"""Counter-based hashing and seed splitting.

Every random choice made by a sketch is a pure function of a 64-bit seed and
a key (coordinate, edge id, row index, ...), so deletions can recompute the
exact values used by the matching insertion without storing them.
"""

from __future__ import annotations

import hashlib
import os

import numpy as np

MASK64 = (1 << 64) - 1

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64(x: int) -> int:
    """Scalar splitmix64 finalizer (matches :func:`hash64` bit for bit)."""
    z = (x + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def hash64(seed: int, keys) -> np.ndarray:
    """Vectorized keyed hash: ``splitmix64(splitmix64(key) ^ seed)``.

    ``seed`` may be a uint64 array broadcasting against ``keys``.
    """
    k = np.asarray(keys, dtype=np.uint64)
    if isinstance(seed, np.ndarray):
        s = seed.astype(np.uint64, copy=False)
    else:
        s = np.uint64(int(seed) & MASK64)
    return _mix(_mix(k) ^ s)


def hash64_int(seed: int, key: int) -> int:
    return splitmix64(splitmix64(key & MASK64) ^ (seed & MASK64))


def _mix(k: np.ndarray) -> np.ndarray:
    z = k + np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def derive_seed(seed: int, *labels) -> int:
    """Derive an independent 64-bit subseed from ``seed`` and a label path."""
    h = hashlib.blake2b(digest_size=8)
    h.update((seed & MASK64).to_bytes(8, "little"))
    for label in labels:
        h.update(b"/")
        h.update(str(label).encode("utf-8"))
    return int.from_bytes(h.digest(), "little")


def resolve_seed(random_state) -> int:
    """Turn an estimator ``random_state`` into a 64-bit integer seed."""
    if random_state is None:
        return int.from_bytes(os.urandom(8), "little")
    if isinstance(random_state, np.random.Generator):
        return int(random_state.integers(0, 2**63))
    if isinstance(random_state, (int, np.integer)):
        return int(random_state) & MASK64
    raise TypeError(f"random_state must be an int, a Generator or None, got {random_state!r}")


def rng_from_seed(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed & MASK64)


def leading_zeros(h) -> np.ndarray:
    """Number of leading zero bits of each 64-bit value (64 for zero)."""
    x = np.array(h, dtype=np.uint64, ndmin=1)
    out = np.zeros(x.shape, dtype=np.int64)
    for s in (32, 16, 8, 4, 2, 1):
        top_clear = (x >> np.uint64(64 - s)) == 0
        out += s * top_clear
        x = np.where(top_clear, x << np.uint64(s), x)
    out += (x == 0).astype(np.int64)
    return out


def derive_seeds(seed: int, count: int, *labels) -> np.ndarray:
    """``count`` subseeds ``derive_seed(seed, *labels, j)`` as a uint64 array."""
    return np.array([derive_seed(seed, *labels, j) for j in range(count)], dtype=np.uint64)
