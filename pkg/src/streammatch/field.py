"""Arithmetic over the prime field GF(p) with p = 2**61 - 1.

Elements live in ``uint64`` numpy arrays. Products are formed from 31-bit
halves so nothing overflows, and reduction uses ``2**61 == 1 (mod p)``.
Matrix products go through float64 BLAS on 21-bit limbs, which is exact as
long as each partial dot product stays below 2**53.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PRIME = (1 << 61) - 1

_P = np.uint64(PRIME)
_LO31 = np.uint64((1 << 31) - 1)
_LO30 = np.uint64((1 << 30) - 1)
_LIMB = 21
_LIMB_MASK = np.uint64((1 << _LIMB) - 1)
# each limb product is < 2**42, so 2**11 terms keep the dot product exact
_MAX_INNER = 1 << 11


@dataclass(frozen=True, slots=True)
class FieldElement:
    """A scalar of GF(p); mostly useful for tests and small computations."""

    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % PRIME)

    def __add__(self, other):
        return FieldElement(self.value + _val(other))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - _val(other))

    def __rsub__(self, other):
        return FieldElement(_val(other) - self.value)

    def __mul__(self, other):
        return FieldElement(self.value * _val(other))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value)

    def __truediv__(self, other):
        return self * FieldElement(_val(other)).inverse()

    def __eq__(self, other):
        if isinstance(other, (FieldElement, int)):
            return self.value == _val(other) % PRIME
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __int__(self):
        return self.value

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in GF(p)")
        return FieldElement(pow(self.value, PRIME - 2, PRIME))


def _val(x) -> int:
    return x.value if isinstance(x, FieldElement) else int(x)


def to_field(h: np.ndarray) -> np.ndarray:
    """Map raw 64-bit hashes to (almost uniform) field elements."""
    v = np.asarray(h, dtype=np.uint64) >> np.uint64(3)
    return np.where(v == _P, np.uint64(0), v)


def _reduce(x: np.ndarray) -> np.ndarray:
    # valid for x < 2**64 - 8
    r = (x & _P) + (x >> np.uint64(61))
    return np.where(r >= _P, r - _P, r)


def add(a, b) -> np.ndarray:
    return _reduce(np.asarray(a, dtype=np.uint64) + np.asarray(b, dtype=np.uint64))


def sub(a, b) -> np.ndarray:
    return add(a, neg(b))


def neg(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint64)
    return np.where(a == 0, a, _P - a)


def mul(a, b) -> np.ndarray:
    """Elementwise product mod p of reduced operands (broadcasts)."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    a_hi, a_lo = a >> np.uint64(31), a & _LO31
    b_hi, b_lo = b >> np.uint64(31), b & _LO31
    mid = a_hi * b_lo + a_lo * b_hi
    total = (
        (a_hi * b_hi << np.uint64(1))
        + (mid >> np.uint64(30))
        + ((mid & _LO30) << np.uint64(31))
        + a_lo * b_lo
    )
    return _reduce(total)


def mul_pow2(a, r: int) -> np.ndarray:
    """Multiply by 2**r mod p, which is a 61-bit rotation."""
    r %= 61
    a = np.asarray(a, dtype=np.uint64)
    if r == 0:
        return a.copy()
    return ((a << np.uint64(r)) & _P) | (a >> np.uint64(61 - r))


def matmul(a, b) -> np.ndarray:
    """Exact matrix product mod p via float64 BLAS on 21-bit limbs."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    rows, inner = a.shape
    cols = b.shape[1]
    out = np.zeros((rows, cols), dtype=np.uint64)
    for start in range(0, inner, _MAX_INNER):
        stop = min(inner, start + _MAX_INNER)
        a_limbs = [((a[:, start:stop] >> np.uint64(_LIMB * i)) & _LIMB_MASK).astype(np.float64) for i in range(3)]
        b_limbs = [((b[start:stop] >> np.uint64(_LIMB * j)) & _LIMB_MASK).astype(np.float64) for j in range(3)]
        stacked = np.vstack(a_limbs) @ np.hstack(b_limbs)
        for i in range(3):
            for j in range(3):
                block = stacked[i * rows:(i + 1) * rows, j * cols:(j + 1) * cols].astype(np.uint64)
                out = add(out, mul_pow2(_reduce(block), _LIMB * (i + j)))
    return out


def scatter_add(target: np.ndarray, index, values) -> None:
    """``target[index] += values`` mod p in place, with repeated indices summed.

    Halves of each value are summed in float64 per distinct index, which is
    exact for up to 2**22 values per call.
    """
    index = np.asarray(index, dtype=np.int64).reshape(-1)
    values = np.asarray(values, dtype=np.uint64).reshape(-1)
    for start in range(0, index.size, 1 << 22):
        idx = index[start:start + (1 << 22)]
        val = values[start:start + (1 << 22)]
        uniq, inv = np.unique(idx, return_inverse=True)
        lo = np.bincount(inv, weights=(val & _LO31).astype(np.float64), minlength=uniq.size)
        hi = np.bincount(inv, weights=(val >> np.uint64(31)).astype(np.float64), minlength=uniq.size)
        total = add(mul_pow2(_reduce(hi.astype(np.uint64)), 31), _reduce(lo.astype(np.uint64)))
        target[uniq] = add(target[uniq], total)


def from_int(values) -> np.ndarray:
    """Reduce signed integers into the field."""
    v = np.asarray(values, dtype=np.int64)
    mag = np.abs(v).astype(np.uint64)
    r = _reduce(_reduce(mag))
    return np.where(v < 0, neg(r), r)


def inverse(a: int) -> int:
    a %= PRIME
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(p)")
    return pow(a, PRIME - 2, PRIME)


def rank(matrix, stop_at: int | None = None) -> int:
    """Rank over GF(p) by Gaussian elimination.

    ``stop_at`` ends the elimination once that many pivots are found, which
    is all a rank-decision query needs.
    """
    m = np.array(matrix, dtype=np.uint64)
    if m.ndim != 2 or m.size == 0:
        return 0
    m %= _P
    rows, cols = m.shape
    limit = min(rows, cols) if stop_at is None else min(rows, cols, stop_at)
    r = 0
    for c in range(cols):
        if r >= limit:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r, c:] = mul(m[r, c:], np.uint64(inverse(int(m[r, c]))))
        below = m[r + 1:, c]
        hit = np.flatnonzero(below)
        if hit.size:
            idx = r + 1 + hit
            m[idx, c:] = sub(m[idx, c:], mul(m[idx, c][:, None], m[r, c:][None, :]))
        r += 1
    return r
