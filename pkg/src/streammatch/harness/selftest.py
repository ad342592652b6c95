"""Fast invariant checks behind ``streammatch selftest``."""

from __future__ import annotations

import numpy as np

from ..bhh import bhh_expected_matching, bhh_instance, random_bhh_instance
from ..generators import gen_random_graph, gen_weighted, shuffle_with_deletions
from ..graph import EdgeStream
from ..matching import exact_max_weight_matching, matching_number, tutte_rank
from ..sketch import L0Estimator, L0SamplerBank, SparseRecovery, TutteRankSketch
from ..weighted import check_rank_structure, lower_bound_divisor, run_combinator, uehara_chen_reference
from .streamfile import format_stream, read_stream


def _tutte_oracle(rng, trials):
    for k in range(trials):
        n = int(rng.integers(2, 20))
        g = gen_random_graph(n, int(rng.integers(0, n * (n - 1) // 2 + 1)), k).snapshot()
        if tutte_rank(g, k) != 2 * matching_number(g):
            return False, {"trial": k}
    return True, {}


def _cancellation(rng, trials):
    for k in range(trials):
        n = int(rng.integers(2, 12))
        base = gen_random_graph(n, int(rng.integers(0, n * (n - 1) // 2 + 1)), k)
        ins = base.to_array()
        dele = ins[rng.permutation(len(ins))].copy()
        dele[:, 0] = -1
        both = np.concatenate([ins, dele]).reshape(-1, 4)
        s = EdgeStream(n, both[:, 0], both[:, 1], both[:, 2], both[:, 3])
        dim = n * n
        coords = s.u * n + s.v
        sketches = [SparseRecovery(dim, 4, 0.01, k), L0Estimator(dim, 0.5, 0.2, k), L0SamplerBank(3, dim, 0.1, k)]
        for sk in sketches:
            sk.update_many(coords, s.sign)
        tutte = TutteRankSketch(n, 4, k)
        tutte.update_many(s.sign, s.u, s.v)
        if not all(sk.is_zero() for sk in sketches + [tutte]):
            return False, {"trial": k}
    return True, {}


def _bhh(rng, trials):
    for k in range(trials):
        t = int(rng.integers(2, 6))
        n = 2 * t * int(rng.integers(1, 4))
        parity = k % 2
        try:
            inst = random_bhh_instance(n, t, parity, k)
            want = bhh_expected_matching(n, t, parity)
        except ValueError:
            continue
        if matching_number(bhh_instance(inst)) != want:
            return False, {"trial": k, "n": n, "t": t}
    return True, {}


def _combinator(rng, trials):
    bound = lower_bound_divisor(1)
    for k in range(trials):
        n = int(rng.integers(3, 13))
        g = gen_weighted(gen_random_graph(n, int(rng.integers(1, n * (n - 1) // 2 + 1)), k), 256, "uniform", k)
        snap = g.snapshot()
        opt = exact_max_weight_matching(snap).weight
        rep = run_combinator(g, handle="exact", seed=k)
        truth = uehara_chen_reference(snap)
        if not (opt / bound <= rep.estimate <= opt) or not all(check_rank_structure(rep, truth)):
            return False, {"trial": k}
    return True, {}


def _round_trip(rng, trials):
    for k in range(trials):
        n = int(rng.integers(2, 10))
        g = gen_weighted(gen_random_graph(n, int(rng.integers(0, n * (n - 1) // 2 + 1)), k), 9, "uniform", k)
        g = shuffle_with_deletions(g, 0.5, k)
        text = format_stream(g)
        if format_stream(read_stream(text)) != text:
            return False, {"trial": k}
    return True, {}


SUITES = {
    "tutte_oracle": _tutte_oracle,
    "sketch_cancellation": _cancellation,
    "bhh_closed_forms": _bhh,
    "combinator_bounds": _combinator,
    "stream_round_trip": _round_trip,
}


def run_selftest(trials: int = 20, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    results = []
    for name, fn in SUITES.items():
        ok, detail = fn(rng, trials)
        results.append({"suite": name, "passed": bool(ok), "detail": detail})
    return {"passed": all(r["passed"] for r in results), "suites": results}
