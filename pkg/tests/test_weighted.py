import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from streammatch import EdgeStream, GraphSnapshot, WeightedEdge, WeightOutOfRange
from streammatch.generators import gen_random_graph, gen_weighted
from streammatch.matching import exact_max_weight_matching, matching_number
from streammatch.weighted import (
    RankPartition,
    WeightedMatchingEstimator,
    black_box_contract,
    builtin_black_boxes,
    check_rank_structure,
    check_report_structure,
    combinator_params,
    lower_bound_divisor,
    rank_of,
    ranks_of,
    representative,
    run_combinator,
    scan_ranks,
    uehara_chen_reference,
    verify_partition,
)


# ------------------------------------------------------------------ ranks
def test_rank_examples():
    assert rank_of(1) == 0
    assert rank_of(7) == 2 and representative(2) == 4
    assert rank_of(2**10) == 10
    with pytest.raises(WeightOutOfRange):
        rank_of(0)
    with pytest.raises(WeightOutOfRange):
        rank_of(9, W=8)


@given(st.lists(st.integers(1, 2**40), max_size=50))
def test_vectorized_ranks_agree(ws):
    assert ranks_of(np.array(ws, dtype=np.int64)).tolist() == [rank_of(w) for w in ws]


def _brute_force_partition_check(classes, wp, eps):
    """Independent pairwise checker."""
    bound = 1 + Fraction(eps)
    for cls in classes:
        for e in cls:
            if not (1 / bound <= Fraction(wp[e], e.w) <= 1):
                return False
        for a, b in itertools.product(cls, cls):
            if Fraction(a.w, b.w) > bound:
                return False
    for i, j in itertools.combinations(range(len(classes)), 2):
        for a in classes[i]:
            for b in classes[j]:
                if not a.w < b.w:
                    return False
    return True


def test_power_of_two_partition_is_valid():
    g = gen_weighted(gen_random_graph(12, 30, 0), 1000, "uniform", 0).snapshot()
    part = RankPartition.from_snapshot(g)
    assert verify_partition(part.as_lists(), part.rounded_weight, 1.0)
    assert sum(len(c) for c in part.as_lists()) == g.m


def test_equal_weights_in_different_classes_are_rejected():
    a, b = WeightedEdge(0, 1, 4), WeightedEdge(2, 3, 4)
    assert not verify_partition([[a], [b]], {a: 4, b: 4}, 1.0)


def test_verify_partition_matches_brute_force():
    rng = np.random.default_rng(0)
    for trial in range(100):
        m = int(rng.integers(1, 9))
        edges = [WeightedEdge(2 * k, 2 * k + 1, int(rng.integers(1, 40))) for k in range(m)]
        k = int(rng.integers(1, 4))
        if rng.random() < 0.5:
            edges.sort(key=lambda e: e.w)
        cuts = sorted(rng.choice(np.arange(1, m + 1), size=min(k - 1, m), replace=False).tolist()) if m > 1 else []
        classes, start = [], 0
        for c in cuts + [m]:
            classes.append(edges[start:c])
            start = c
        wp = {e: max(1, int(e.w / (1 + rng.random()))) if rng.random() < 0.3 else 1 << rank_of(e.w) for e in edges}
        eps = float(rng.choice([0.5, 1.0, 2.0]))
        assert verify_partition(classes, wp, eps) == _brute_force_partition_check(classes, wp, eps), trial


# ---------------------------------------------------------------- reference
def test_reference_examples():
    g = GraphSnapshot.from_edges(4, [(0, 1, 1), (2, 3, 2)])
    truth = uehara_chen_reference(g)
    assert truth.S == (2, 1) and truth.sizes == (1, 1)
    single = gen_random_graph(14, 40, 3).snapshot()
    tr = uehara_chen_reference(single)
    assert 2 * tr.sizes[0] >= matching_number(single)


@given(st.integers(2, 14), st.integers(0, 10**6))
def test_reference_weight_sandwich(n, seed):
    m = int(np.random.default_rng(seed).integers(0, n * (n - 1) // 2 + 1))
    g = gen_weighted(gen_random_graph(n, m, seed), 1024, "geometric", seed).snapshot()
    opt = exact_max_weight_matching(g).weight
    for s in (None, seed):
        w = uehara_chen_reference(g, seed=s).rounded_weight
        assert opt <= 8 * w and w <= opt


# ---------------------------------------------------------------- parameters
def test_params_closed_forms():
    p1, p2 = combinator_params(1), combinator_params(2)
    assert (p1.T, p1.c) == (6, Fraction(37, 5))
    assert (p2.T, p2.c) == (28, Fraction(106, 5))
    assert float(p1.c) == 7.4 and float(p2.c) == 21.2
    assert lower_bound_divisor(1) == 1520


@given(st.fractions(min_value=1, max_value=50))
def test_params_make_case_bounds_agree(lam):
    # the two case bounds of the charging argument coincide: c / (5 lam) = 2T/(25 lam) + 1
    p = combinator_params(lam)
    assert p.c / (5 * p.lam) == 2 * p.T / (25 * p.lam) + 1
    assert p.T == 8 * p.lam**2 - 2 * p.lam


# ----------------------------------------------------------------- the scan
def test_single_rank_gives_two_fifths_of_nu():
    g = gen_random_graph(16, 30, 1)
    rep = run_combinator(g, handle="exact", seed=0)
    nu = matching_number(g.snapshot())
    assert rep.t == 0 and rep.I_good == rep.I_sign == (0,)
    assert rep.estimate_exact == Fraction(2, 5) * nu


def test_small_low_rank_is_not_good():
    # rank 3: 4 disjoint heavy edges; rank 0: 2 extra light edges (2+4 < 6*4)
    heavy = [(2 * k, 2 * k + 1, 8) for k in range(4)]
    light = [(8, 9, 1), (10, 11, 1)]
    rep = run_combinator(EdgeStream.from_edges(12, heavy + light), handle="exact", seed=0)
    alone = run_combinator(EdgeStream.from_edges(12, heavy), handle="exact", seed=0)
    assert rep.t == 3 and 0 not in rep.I_good and rep.R_hat[0] == 0
    assert rep.estimate == alone.estimate == 0.4 * 8 * 4


def test_empty_graph():
    rep = run_combinator(EdgeStream.from_edges(5, []), handle="exact")
    assert rep.t == -1 and rep.estimate == 0 and rep.failure_budget == 0


@given(st.lists(st.integers(0, 10**4), min_size=1, max_size=12), st.sampled_from([1, 2, 4]))
def test_structure_holds_for_any_inputs(raw, lam):
    rep = scan_ranks(raw, combinator_params(lam))
    assert all(check_report_structure(rep))
    assert rep.S_raw == tuple(Fraction(x) for x in raw)


def test_determinism_and_json_order():
    g = gen_weighted(gen_random_graph(14, 40, 2), 500, "uniform", 2)
    a = run_combinator(g, handle="tutte", seed=9)
    b = run_combinator(g, handle="tutte", seed=9)
    assert a == b and a.to_json() == b.to_json()
    assert list(json.loads(a.to_json())) == [
        "lambda", "T", "c", "t", "S_hat", "R_hat", "I_good", "I_sign", "estimate", "failure_budget"]


def test_black_box_examples():
    boxes = builtin_black_boxes()
    assert set(boxes) == {"exact", "greedy", "tutte", "arboricity"}
    k3 = EdgeStream.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    assert boxes["exact"].make(0).fit(k3).estimate_ == 1
    p4 = EdgeStream.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert boxes["greedy"].make(0).fit(p4).estimate_ in (1, 2)
    nu3 = EdgeStream.from_edges(6, [(0, 1), (2, 3), (4, 5)])
    v = boxes["tutte"].make(0).fit(nu3).estimate_
    assert v == 2 and v <= 3 <= 4 * v


@pytest.mark.parametrize("handle", ["exact", "greedy", "tutte"])
def test_combinator_checks_on_random_graphs(handle):
    for seed in range(25):
        n = 4 + seed % 10
        g = gen_weighted(gen_random_graph(n, min(n * (n - 1) // 2, 2 * n), seed), 1024, "geometric", seed)
        snap = g.snapshot()
        rep = run_combinator(g, handle=handle, seed=seed)
        opt = exact_max_weight_matching(snap).weight
        assert rep.estimate <= opt
        assert not black_box_contract(rep, snap)
        failed = [c for c in check_rank_structure(rep, uehara_chen_reference(snap)) if not c]
        assert not failed, failed


def test_estimator_api_and_words():
    g = gen_weighted(gen_random_graph(10, 20, 0), 64, "uniform", 0)
    est = WeightedMatchingEstimator("greedy", W=64, random_state=1)
    assert est.predict(g) == est.report_.estimate
    assert any(k.startswith("rank0.") for k in est.words_)
    with pytest.raises(WeightOutOfRange):
        WeightedMatchingEstimator("exact", W=8).fit(g)
