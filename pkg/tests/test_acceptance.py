"""Acceptance criteria, one test per criterion; each prints a PASS/FAIL line.

Tolerances are pinned constants below; none are tuned to the observed data.
"""

import subprocess
import sys
import time
import warnings
from fractions import Fraction

import numpy as np
import pytest

from streammatch import EdgeStream, NonIntegral, PreconditionWarning, field
from streammatch.bhh import bhh_expected_matching, bhh_instance, random_bhh_instance
from streammatch.estimators import (
    ArboricityMatchingEstimator,
    HeavyEstimator,
    Regime,
    ShallowOnePassEstimator,
    ShallowTwoPassEstimator,
    TreeMatchingEstimator,
)
from streammatch.generators import (
    gen_bounded_arboricity,
    gen_random_graph,
    gen_random_tree,
    gen_weighted,
    planted_heavy,
    planted_shallow,
)
from streammatch.harness.runner import space_profile
from streammatch.matching import exact_max_weight_matching, heavy_shallow_ground_truth, matching_number, tutte_rank
from streammatch.sketch import (
    DoublingRankSketch,
    L0Estimator,
    L0Sampler,
    L0SamplerBank,
    SparseRecovery,
    TutteRankSketch,
)
from streammatch.weighted import (
    black_box_contract,
    check_rank_structure,
    lower_bound_divisor,
    run_combinator,
    uehara_chen_reference,
)

pytestmark = pytest.mark.acceptance

TUTTE_TRIALS, TUTTE_MAX_N, TUTTE_SECONDS = 500, 30, 10.0
SKETCH_TRIALS, SKETCH_MAX_K, SKETCH_MAX_N = 200, 32, 64
BHH_TS, BHH_MAX_N, BHH_PER_CASE = (2, 3, 4, 5), 120, 50
WEIGHTED_TRIALS, WEIGHTED_MAX_N, WEIGHTED_W, WEIGHTED_SECONDS = 200, 22, 2**10, 60.0
EXACT_DIVISOR = 1520
GREEDY_TRIALS = 500
TREE_TRIALS, TREE_N, TREE_EPS, TREE_DELTA, TREE_MIN_PASS, TREE_SECONDS = 100, 10**4, 0.1, 0.05, 95, 30.0
REGIME_TRIALS = 200
ALG3_ALPHA, ALG3_EPS, ALG3_NS, ALG3_TRIALS, ALG3_RATE = 3, 0.1, (10**3, 10**4), 50, 0.80
SPACE_NS, SPACE_MAX_SLOPE = tuple(2**k for k in range(10, 17)), 0.85
CANCEL_TRIALS = 1000
CLI_REPEATS = 20


@pytest.fixture
def verdict(capsys):
    def emit(label, ok, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} [{label}] {detail}")
        assert ok, f"{label}: {detail}"

    return emit


def _random_graph(rng, max_n, seed, min_n=1):
    n = int(rng.integers(min_n, max_n + 1))
    m = int(rng.integers(0, n * (n - 1) // 2 + 1))
    return gen_random_graph(n, m, seed)


def test_c01_tutte_oracle_equivalence(verdict):
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    bad = []
    for k in range(TUTTE_TRIALS):
        g = _random_graph(rng, TUTTE_MAX_N, k).snapshot()
        if tutte_rank(g, 1000 + k) != 2 * matching_number(g):
            bad.append(k)
    took = time.perf_counter() - start
    verdict("1 tutte-oracle", not bad and took < TUTTE_SECONDS,
            f"{TUTTE_TRIALS - len(bad)}/{TUTTE_TRIALS} equal, {took:.2f}s (limit {TUTTE_SECONDS}s)")


def _dense_rank_of_tutte(sk, g):
    t = np.zeros((g.n, g.n), dtype=np.uint64)
    if len(g):
        x = sk.indeterminates(g.u, g.v)
        t[g.u, g.v] = x
        t[g.v, g.u] = field.neg(x)
    return field.rank(t)


def test_c02_sketch_rank_vs_dense(verdict):
    rng = np.random.default_rng(202)
    bad = []
    for k in range(SKETCH_TRIALS):
        n = int(rng.integers(2, SKETCH_MAX_N + 1))
        kk = int(rng.integers(1, SKETCH_MAX_K + 1))
        m = int(rng.integers(0, n * (n - 1) // 2 + 1))
        g = gen_random_graph(n, m, k)
        sk = TutteRankSketch(n, kk, 5000 + k).consume(g)
        if sk.rank() != min(kk + 1, _dense_rank_of_tutte(sk, g)):
            bad.append(k)
    verdict("2 sketch-rank", not bad, f"{SKETCH_TRIALS - len(bad)}/{SKETCH_TRIALS} trials match")


def test_c03_bhh_closed_forms(verdict):
    summary, bad = [], []
    for t in BHH_TS:
        sizes = [n for n in range(2 * t, BHH_MAX_N + 1, 2 * t) if n % 4 == 0]
        for parity in (0, 1):
            done, seed = 0, 0
            while done < BHH_PER_CASE:
                n = sizes[seed % len(sizes)]
                seed += 1
                try:
                    inst = random_bhh_instance(n, t, parity, 31 * seed + t)
                except NonIntegral:
                    continue
                if matching_number(bhh_instance(inst)) != bhh_expected_matching(n, t, parity):
                    bad.append((t, parity, n))
                done += 1
            summary.append(f"t={t}/p={parity}:{done}")
    ok = not bad and bhh_expected_matching(12, 3, 1) == 9 and bhh_expected_matching(12, 3, 0) == 7
    verdict("3 bhh-closed-forms", ok, f"{len(bad)} mismatches over {' '.join(summary)}; t=3,n=12 -> 9 vs 7")


@pytest.fixture(scope="module")
def weighted_instances():
    rng = np.random.default_rng(404)
    out = []
    start = time.perf_counter()
    for k in range(WEIGHTED_TRIALS):
        n = int(rng.integers(2, WEIGHTED_MAX_N + 1))
        m = int(rng.integers(1, min(n * (n - 1) // 2, 3 * n) + 1))
        law = "uniform" if k % 2 else "geometric"
        g = gen_weighted(gen_random_graph(n, m, k), WEIGHTED_W, law, k)
        snap = g.snapshot()
        out.append((g, snap, exact_max_weight_matching(snap).weight))
    return out, time.perf_counter() - start


def test_c04_rank_greedy_bound(verdict, weighted_instances):
    instances, oracle_time = weighted_instances
    start = time.perf_counter()
    bad = []
    for k, (_, snap, opt) in enumerate(instances):
        w = uehara_chen_reference(snap).rounded_weight
        if not (Fraction(opt, 8) <= w <= opt):
            bad.append(k)
    took = oracle_time + time.perf_counter() - start
    verdict("4 rank-greedy-bound", not bad and took < WEIGHTED_SECONDS,
            f"{len(instances) - len(bad)}/{len(instances)} within [w*/8, w*], {took:.2f}s (limit {WEIGHTED_SECONDS}s)")


def test_c05_combinator_exact_black_box(verdict, weighted_instances):
    instances, _ = weighted_instances
    assert lower_bound_divisor(1) == EXACT_DIVISOR
    over, under, worst = [], [], float("inf")
    for k, (g, _, opt) in enumerate(instances):
        rep = run_combinator(g, handle="exact", seed=k)
        est = rep.estimate_exact
        if est > opt:
            over.append(k)
        if est < Fraction(opt, EXACT_DIVISOR):
            under.append(k)
        worst = min(worst, float(est / opt))
    verdict("5 combinator-exact", not over and not under,
            f"{len(over)} above w*, {len(under)} below w*/{EXACT_DIVISOR}; worst ratio {worst:.4f} (informational)")


def test_c06_combinator_greedy_black_box(verdict):
    rng = np.random.default_rng(606)
    contract_runs, over, check_fail, excluded = 0, [], [], 0
    for k in range(GREEDY_TRIALS):
        n = int(rng.integers(2, 19))
        m = int(rng.integers(1, min(n * (n - 1) // 2, 3 * n) + 1))
        g = gen_weighted(gen_random_graph(n, m, k), WEIGHTED_W, "geometric" if k % 2 else "uniform", k)
        snap = g.snapshot()
        rep = run_combinator(g, handle="greedy", seed=k)
        if black_box_contract(rep, snap, 2):
            excluded += 1
            continue
        contract_runs += 1
        if rep.estimate_exact > exact_max_weight_matching(snap).weight:
            over.append(k)
        failed = [c.name for c in check_rank_structure(rep, uehara_chen_reference(snap)) if not c]
        if failed:
            check_fail.append((k, failed))
    verdict("6 combinator-greedy", not over and not check_fail and excluded == 0,
            f"{contract_runs} contract-holding runs, {excluded} excluded, {len(over)} above w*, "
            f"{len(check_fail)} with failed structure checks")


def test_c07_tree_estimator(verdict):
    start = time.perf_counter()
    good = 0
    factor = 2 * (1 + TREE_EPS) / (1 - TREE_EPS)
    for k in range(TREE_TRIALS):
        g = gen_random_tree(TREE_N, k)
        nu = matching_number(g.snapshot())
        est = TreeMatchingEstimator(TREE_EPS, TREE_DELTA, random_state=k).fit(g).estimate_
        good += est <= nu <= factor * est
    took = time.perf_counter() - start
    verdict("7 tree-estimator", good >= TREE_MIN_PASS and took < TREE_SECONDS,
            f"{good}/{TREE_TRIALS} within factor {factor:.3f} (need {TREE_MIN_PASS}), {took:.2f}s (limit {TREE_SECONDS}s)")


# (name, make estimator, planted graph for a target count, C, T, required rate)
REGIMES = {
    "heavy": dict(C=5, T=1000, eps=0.3, rate=0.90, n=10**5,
                  make=lambda C, T, eps, seed: HeavyEstimator(C, T, eps, random_state=seed),
                  graph=lambda n, target, C, seed: planted_heavy(n, target, C, seed)),
    "shallow-2pass": dict(C=2, T=250, eps=0.3, rate=0.90, n=1000,
                          make=lambda C, T, eps, seed: ShallowTwoPassEstimator(C, T, eps, 1.0, random_state=seed),
                          graph=lambda n, target, C, seed: planted_shallow(n, target, seed, path_length=2, stars=30, C=C)),
    "shallow-1pass": dict(C=1, T=1100, eps=0.5, rate=0.70, n=20000,
                          make=lambda C, T, eps, seed: ShallowOnePassEstimator(C, T, eps, 1.0, random_state=seed),
                          graph=lambda n, target, C, seed: planted_shallow(n, target, seed, stars=500, C=C)),
}


@pytest.mark.parametrize("name", list(REGIMES))
def test_c08_two_regime_contracts(verdict, name):
    cfg = REGIMES[name]
    C, T, eps = cfg["C"], cfg["T"], cfg["eps"]
    results = {}
    for label, target in (("2T", 2 * T), ("T/4", T // 4)):
        hits = 0
        for k in range(REGIME_TRIALS):
            g = cfg["graph"](cfg["n"], target, C, k)
            h, s = heavy_shallow_ground_truth(g.snapshot(), C)
            truth = h if name == "heavy" else s
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", PreconditionWarning)
                est = cfg["make"](C, T, eps, 7919 + k).fit(g).estimate_
            if label == "2T":
                hits += est.regime is Regime.ACCURATE and est.holds_for(truth)
            else:
                hits += est.value < 3 * T
        results[label] = hits / REGIME_TRIALS
    ok = all(r >= cfg["rate"] for r in results.values())
    verdict(f"8 {name}", ok, f"accurate at 2T {results['2T']:.3f}, value<3T at T/4 {results['T/4']:.3f} "
            f"(need {cfg['rate']:.2f}), T={T}, eps={eps}")


def test_c09_composed_estimator_factor(verdict):
    factor = 2 * (1 + ALG3_EPS) * (5 * ALG3_ALPHA + 9) / (1 - ALG3_EPS)
    rates = {}
    for n in ALG3_NS:
        good = 0
        for k in range(ALG3_TRIALS):
            g = gen_bounded_arboricity(n, ALG3_ALPHA, k)
            nu = matching_number(g.snapshot())
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", PreconditionWarning)
                est = ArboricityMatchingEstimator(ALG3_ALPHA, ALG3_EPS, 1, random_state=k).fit(g).estimate_
            good += est <= nu <= factor * est
        rates[n] = good / ALG3_TRIALS
    ok = all(r >= ALG3_RATE for r in rates.values())
    verdict("9 composed-factor", ok,
            ", ".join(f"n={n}: {r:.2f}" for n, r in rates.items()) + f" within factor {factor:.2f} (need {ALG3_RATE})")


def test_c09b_composed_estimator_space(verdict):
    prof = space_profile(SPACE_NS, alpha=ALG3_ALPHA, eps=ALG3_EPS, passes=1)
    verdict("9b composed-space", prof["slope"] <= SPACE_MAX_SLOPE,
            f"fitted exponent {prof['slope']:.3f} (limit {SPACE_MAX_SLOPE}) over n=2^10..2^16, words {prof['words']}")


def _cancelling_stream(rng, n):
    """Every edge toggles an even number of times, so the net graph is empty."""
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    chosen = rng.choice(len(pairs), size=int(rng.integers(1, min(len(pairs), 12) + 1)), replace=False)
    tokens = [int(c) for c in chosen for _ in range(2 * int(rng.integers(1, 3)))]
    tokens = [tokens[i] for i in rng.permutation(len(tokens))]
    present, rows = set(), []
    for c in tokens:
        a, b = pairs[c]
        rows.append((-1 if c in present else 1, a, b))
        present ^= {c}
    s, u, v = zip(*rows)
    return EdgeStream(n, s, u, v)


def test_c10_linearity_cancellation(verdict):
    rng = np.random.default_rng(1010)
    bad = []
    for k in range(CANCEL_TRIALS):
        n = int(rng.integers(2, 13))
        s = _cancelling_stream(rng, n)
        dim = n * n
        coords = s.u * n + s.v
        vector_sketches = [SparseRecovery(dim, 4, 0.01, k), L0Estimator(dim, 0.5, 0.2, k),
                           L0SamplerBank(3, dim, 0.1, k), L0Sampler(dim, 0.1, k)]
        for sk in vector_sketches:
            sk.update_many(coords, s.sign)
        rank_sketches = [TutteRankSketch(n, 4, k), DoublingRankSketch(n, 8, k)]
        for sk in rank_sketches:
            sk.update_many(s.sign, s.u, s.v)
        if not all(sk.is_zero() for sk in vector_sketches + rank_sketches):
            bad.append(k)
    verdict("10 cancellation", not bad, f"{CANCEL_TRIALS - len(bad)}/{CANCEL_TRIALS} streams leave all 6 sketch types at zero")


def test_c11_cli_determinism(verdict, tmp_path):
    path = tmp_path / "stream.txt"
    base = [sys.executable, "-m", "streammatch.harness.cli"]
    subprocess.run(base + ["gen", "--kind", "weighted", "--n", "200", "--nu", "2", "--W", "256",
                           "--churn", "0.3", "--seed", "5", "--out", str(path)], check=True)
    cmd = base + ["run", str(path), "--algo", "combinator", "--blackbox", "tutte", "--seed", "3", "--exact", "--no-time"]
    outputs = [subprocess.run(cmd, check=True, capture_output=True).stdout for _ in range(CLI_REPEATS)]
    same = sum(o == outputs[0] for o in outputs)
    verdict("11 cli-determinism", same == CLI_REPEATS and outputs[0].strip() != b"",
            f"{same}/{CLI_REPEATS} byte-identical reports ({len(outputs[0])} bytes)")
