"""Common machinery for linear sketches: word accounting and binary blobs.

Blob layout (all little-endian)::

    b"SMSK" | u16 version | u16 type tag | u16 #params | u64 params...
            | u64 #words | u64 words...

Float parameters are stored as their IEEE-754 bit patterns.
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"SMSK"
VERSION = 1

_REGISTRY: dict[int, type] = {}


def register(tag: int):
    def wrap(cls):
        if tag in _REGISTRY:
            raise ValueError(f"duplicate sketch tag {tag}")
        cls.TYPE_TAG = tag
        _REGISTRY[tag] = cls
        return cls

    return wrap


def float_bits(x: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", float(x)))[0]


def bits_float(b: int) -> float:
    return struct.unpack("<d", struct.pack("<Q", int(b)))[0]


class LinearSketch:
    """Base class for turnstile sketches.

    Subclasses implement ``_params`` (a tuple of ints), ``_from_params`` and
    ``_state`` (the list of counter arrays; all carry uint64-compatible data).
    """

    TYPE_TAG = 0

    def _params(self) -> tuple[int, ...]:
        raise NotImplementedError

    @classmethod
    def _from_params(cls, params: tuple[int, ...]):
        raise NotImplementedError

    def _state(self) -> list[np.ndarray]:
        raise NotImplementedError

    def _flush(self) -> None:
        """Apply buffered updates; a no-op for unbuffered sketches."""

    @property
    def words(self) -> int:
        """Machine words of state: counters plus stored seeds and parameters."""
        self._flush()
        return sum(int(a.size) for a in self._state()) + len(self._params())

    def is_zero(self) -> bool:
        self._flush()
        return all(not np.any(a) for a in self._state())

    def to_bytes(self) -> bytes:
        self._flush()
        params = self._params()
        words = np.concatenate([a.reshape(-1).view(np.uint64) for a in self._state()]) if self._state() else np.zeros(0, np.uint64)
        head = MAGIC + struct.pack("<HHH", VERSION, self.TYPE_TAG, len(params))
        head += struct.pack(f"<{len(params)}Q", *params)
        head += struct.pack("<Q", words.size)
        return head + words.astype("<u8").tobytes()

    @staticmethod
    def from_bytes(blob: bytes) -> LinearSketch:
        if blob[:4] != MAGIC:
            raise ValueError("not a sketch blob")
        version, tag, nparams = struct.unpack_from("<HHH", blob, 4)
        if version != VERSION:
            raise ValueError(f"unsupported sketch blob version {version}")
        cls = _REGISTRY.get(tag)
        if cls is None:
            raise ValueError(f"unknown sketch type tag {tag}")
        off = 10
        params = struct.unpack_from(f"<{nparams}Q", blob, off)
        off += 8 * nparams
        (count,) = struct.unpack_from("<Q", blob, off)
        off += 8
        words = np.frombuffer(blob, dtype="<u8", count=count, offset=off).astype(np.uint64)
        sk = cls._from_params(tuple(params))
        pos = 0
        for arr in sk._state():
            flat = arr.reshape(-1).view(np.uint64)
            flat[:] = words[pos:pos + flat.size]
            pos += flat.size
        if pos != count:
            raise ValueError("sketch blob has the wrong number of words")
        return sk

    def state_equal(self, other: LinearSketch) -> bool:
        self._flush()
        other._flush()
        return type(self) is type(other) and all(
            np.array_equal(a, b) for a, b in zip(self._state(), other._state())
        )
