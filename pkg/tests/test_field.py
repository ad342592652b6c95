import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from streammatch import field
from streammatch.field import PRIME, FieldElement

elements = st.integers(min_value=0, max_value=PRIME - 1)


def _dense_rank(rows):
    """Plain Python Gaussian elimination over GF(p) (independent oracle)."""
    m = [[x % PRIME for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], PRIME - 2, PRIME)
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] * inv % PRIME
                m[r] = [(x - f * y) % PRIME for x, y in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return rank


@given(st.lists(st.tuples(elements, elements), min_size=1, max_size=30))
def test_mul_add_match_python_ints(pairs):
    a = np.array([p[0] for p in pairs], dtype=np.uint64)
    b = np.array([p[1] for p in pairs], dtype=np.uint64)
    assert field.mul(a, b).tolist() == [x * y % PRIME for x, y in pairs]
    assert field.add(a, b).tolist() == [(x + y) % PRIME for x, y in pairs]
    assert field.sub(a, b).tolist() == [(x - y) % PRIME for x, y in pairs]
    assert field.neg(a).tolist() == [(-x) % PRIME for x, _ in pairs]


@given(elements, st.integers(min_value=0, max_value=200))
def test_mul_pow2_is_multiplication(x, r):
    got = field.mul_pow2(np.array([x], dtype=np.uint64), r)
    assert int(got[0]) == x * pow(2, r, PRIME) % PRIME


@given(st.lists(st.integers(min_value=-(2**62), max_value=2**62), min_size=1, max_size=20))
def test_from_int_reduces_signed_values(vals):
    assert field.from_int(np.array(vals, dtype=np.int64)).tolist() == [v % PRIME for v in vals]


def test_matmul_against_object_arithmetic():
    rng = np.random.default_rng(3)
    for shape in [(3, 4, 5), (1, 2049, 2), (7, 5000, 3)]:
        n, k, m = shape
        a = rng.integers(0, PRIME, size=(n, k), dtype=np.uint64)
        b = rng.integers(0, PRIME, size=(k, m), dtype=np.uint64)
        want = (a.astype(object) @ b.astype(object)) % PRIME
        assert (field.matmul(a, b).astype(object) == want).all()


def test_scatter_add_repeated_indices():
    rng = np.random.default_rng(0)
    target = rng.integers(0, PRIME, size=10, dtype=np.uint64)
    idx = rng.integers(0, 10, size=5000)
    vals = rng.integers(0, PRIME, size=5000, dtype=np.uint64)
    want = [int(x) for x in target]
    for i, v in zip(idx.tolist(), vals.tolist()):
        want[i] = (want[i] + v) % PRIME
    field.scatter_add(target, idx, vals)
    assert target.tolist() == want


def test_rank_against_dense_oracle():
    rng = np.random.default_rng(1)
    for _ in range(40):
        n, m = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        r = int(rng.integers(0, min(n, m) + 1))
        a = rng.integers(0, 50, size=(n, r)).astype(object)
        b = rng.integers(0, 50, size=(r, m)).astype(object)
        mat = (a @ b) % PRIME if r else np.zeros((n, m), dtype=object)
        rows = [[int(x) for x in row] for row in mat]
        assert field.rank(np.array(rows, dtype=np.uint64)) == _dense_rank(rows)


def test_rank_stop_at_caps_result():
    eye = np.eye(6, dtype=np.uint64)
    assert field.rank(eye) == 6
    assert field.rank(eye, stop_at=3) == 3


@given(st.integers(min_value=1, max_value=PRIME - 1))
def test_inverse(x):
    assert x * field.inverse(x) % PRIME == 1
    assert FieldElement(x) / FieldElement(x) == 1


def test_field_element_arithmetic():
    a, b = FieldElement(PRIME - 1), FieldElement(5)
    assert a + b == 4
    assert -a == 1
    assert (a * b).value == (PRIME - 5)
