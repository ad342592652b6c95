"""Input validation helpers in the style of ``sklearn.utils.validation``."""

from __future__ import annotations

import numbers
from typing import Iterable

import numpy as np

from .exceptions import StreamError
from .graph import EdgeStream, EdgeUpdate, GraphSnapshot


def check_stream(X, n_vertices: int | None = None) -> EdgeStream:
    """Coerce ``X`` into a validated :class:`EdgeStream`.

    Accepted inputs are an ``EdgeStream``, a ``GraphSnapshot`` (read as an
    insertion-only stream), an integer array of shape ``(m, 3)`` or
    ``(m, 4)`` with rows ``sign, u, v[, w]``, or an iterable of
    :class:`EdgeUpdate`. For arrays and iterables, ``n_vertices`` defaults
    to one more than the largest vertex id.
    """
    if isinstance(X, EdgeStream):
        if n_vertices is not None and n_vertices != X.n:
            raise StreamError(f"stream has n={X.n}, expected {n_vertices}")
        return X
    if isinstance(X, GraphSnapshot):
        return X.to_stream()
    if isinstance(X, np.ndarray) or (isinstance(X, (list, tuple)) and X and not isinstance(X[0], EdgeUpdate)):
        arr = np.asarray(X)
        if arr.size == 0:
            return EdgeStream(n_vertices or 0, [], [], [], [])
        if arr.ndim != 2 or arr.shape[1] not in (3, 4):
            raise StreamError(f"expected an (m, 3) or (m, 4) update array, got shape {arr.shape}")
        if not np.issubdtype(arr.dtype, np.integer):
            if not np.all(np.mod(arr, 1) == 0):
                raise StreamError("update array must be integral")
            arr = arr.astype(np.int64)
        n = int(arr[:, 1:3].max()) + 1 if n_vertices is None else int(n_vertices)
        w = arr[:, 3] if arr.shape[1] == 4 else None
        return EdgeStream(n, arr[:, 0], arr[:, 1], arr[:, 2], w)
    if isinstance(X, Iterable):
        updates = list(X)
        if not all(isinstance(u, EdgeUpdate) for u in updates):
            raise StreamError("iterable input must contain EdgeUpdate objects")
        n = n_vertices
        if n is None:
            n = 1 + max((up.edge.v for up in updates), default=-1)
        return EdgeStream.from_updates(n, updates)
    raise StreamError(f"cannot interpret {type(X).__name__} as an edge stream")


def check_scalar(x, name: str, *, target_type=numbers.Real, min_val=None, max_val=None, include_min=True, include_max=True):
    """Range/type check for a single hyperparameter; returns ``x``."""
    if not isinstance(x, target_type) or isinstance(x, bool):
        raise TypeError(f"{name} must be {target_type}, got {type(x).__name__}")
    if min_val is not None and (x < min_val or (not include_min and x == min_val)):
        raise ValueError(f"{name}={x} is below the allowed minimum {min_val}")
    if max_val is not None and (x > max_val or (not include_max and x == max_val)):
        raise ValueError(f"{name}={x} is above the allowed maximum {max_val}")
    return x
