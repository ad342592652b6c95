import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from streammatch import ConsistencyError, EdgeStream, GraphSnapshot, SelfLoopError, StreamError, WeightedEdge
from streammatch.validation import check_scalar, check_stream


def test_edge_is_canonical():
    e = WeightedEdge(5, 2, 3)
    assert e.pair == (2, 5) and e.w == 3
    with pytest.raises(SelfLoopError):
        WeightedEdge(1, 1)
    with pytest.raises(StreamError):
        WeightedEdge(0, 1, 0)


def test_consistency_rules():
    EdgeStream(3, [1, -1, 1], [0, 1, 0], [1, 0, 1])
    with pytest.raises(ConsistencyError):
        EdgeStream(3, [1, 1], [0, 1], [1, 0])
    with pytest.raises(ConsistencyError):
        EdgeStream(3, [-1], [0], [1])
    with pytest.raises(ConsistencyError) as info:
        EdgeStream(3, [1, -1], [0, 0], [1, 1], [4, 5])
    assert info.value.position == 1
    with pytest.raises(StreamError):
        EdgeStream(3, [1], [0], [3])
    with pytest.raises(StreamError):
        EdgeStream(3, [1], [0], [1], [9], W=8)


@st.composite
def turnstile(draw):
    n = draw(st.integers(2, 9))
    present = {}
    rows = []
    for _ in range(draw(st.integers(0, 40))):
        a, b = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        if key in present:
            rows.append((-1, *key, present.pop(key)))
        else:
            present[key] = draw(st.integers(1, 5))
            rows.append((1, *key, present[key]))
    return n, rows, present


@given(turnstile())
def test_snapshot_matches_replay(case):
    n, rows, present = case
    cols = list(zip(*rows)) if rows else [[], [], [], []]
    s = EdgeStream(n, *cols)
    snap = s.snapshot()
    assert {e.pair: e.w for e in snap.edges} == present
    assert s.net_edge_count() == len(present) == snap.m
    assert sum(len(c) for c in s.chunks(7)) == len(s)
    again = snap.to_stream().snapshot()
    assert again.edges == snap.edges


def test_snapshot_accessors():
    g = GraphSnapshot.from_edges(4, [(0, 1, 2), (1, 2, 7)])
    assert g.degrees().tolist() == [1, 2, 1, 0]
    assert g.weight(2, 1) == 7 and g.has_edge(1, 0) and not g.has_edge(0, 2)
    assert g.edge_array().tolist() == [[0, 1, 2], [1, 2, 7]]
    assert g.induced([1, 2]).m == 1
    with pytest.raises(StreamError):
        GraphSnapshot.from_edges(2, [(0, 2)])


def test_check_stream_accepts_arrays_and_rejects_bad_input():
    s = check_stream(np.array([[1, 0, 1, 1], [1, 1, 2, 1]]))
    assert isinstance(s, EdgeStream) and s.n >= 3
    assert check_stream(s) is s or check_stream(s) == s
    with pytest.raises((ValueError, TypeError)):
        check_stream("not a stream")
    assert check_scalar(0.5, "eps", min_val=0, max_val=1) == 0.5
    with pytest.raises(ValueError):
        check_scalar(2.0, "eps", min_val=0, max_val=1)
