"""Build estimators by name, run them on stream files and collect reports."""

from __future__ import annotations

import time
import warnings

import numpy as np

from ..bhh import bhh_instance, random_bhh_instance
from ..estimators.arboricity import ArboricityMatchingEstimator
from ..estimators.tree import TreeMatchingEstimator
from ..exceptions import EstimatorFailure, InstanceTooLarge, PreconditionWarning
from ..generators import gen_bounded_arboricity, gen_random_tree, gen_weighted, shuffle_with_deletions
from ..graph import EdgeStream
from ..matching import arboricity_upper, exact_max_weight_matching, matching_number
from ..weighted.combinator import WeightedMatchingEstimator
from .report import RunReport, ratio_of
from .streamfile import StreamFile

ALGORITHMS = ("tree", "arboricity", "combinator")
BLACK_BOXES = ("exact", "greedy", "tutte", "arboricity")
KINDS = ("tree", "arboricity", "weighted", "bhh")


def generate(kind: str, n: int, seed: int = 0, nu: int = 2, W: int = 16, t: int = 3, parity: int = 0,
             churn: float = 0.0, law: str = "uniform") -> EdgeStream:
    """Instance generator behind ``streammatch gen``."""
    if kind == "tree":
        stream = gen_random_tree(n, seed)
    elif kind == "arboricity":
        stream = gen_bounded_arboricity(n, nu, seed)
    elif kind == "weighted":
        stream = gen_weighted(gen_bounded_arboricity(n, nu, seed), W, law, seed)
    elif kind == "bhh":
        stream = bhh_instance(random_bhh_instance(n, t, parity, seed)).to_stream()
    else:
        raise ValueError(f"unknown kind {kind!r}; choose from {KINDS}")
    return shuffle_with_deletions(stream, churn, seed) if churn else stream


def build_estimator(algo: str, *, eps: float = 0.25, passes: int = 1, alpha: float = 1.0,
                    blackbox: str = "exact", delta: float = 0.05, W: int | None = None, seed: int = 0):
    if algo == "tree":
        return TreeMatchingEstimator(eps=eps, delta=delta, random_state=seed)
    if algo == "arboricity":
        return ArboricityMatchingEstimator(alpha=alpha, eps=eps, passes=passes, random_state=seed)
    if algo == "combinator":
        params = {"alpha": alpha, "eps": eps, "passes": passes} if blackbox == "arboricity" else None
        return WeightedMatchingEstimator(blackbox, W=W, blackbox_params=params, random_state=seed)
    raise ValueError(f"unknown algorithm {algo!r}; choose from {ALGORITHMS}")


def exact_values(stream: EdgeStream) -> dict:
    """Oracle values for the final graph of ``stream``."""
    g = stream.snapshot()
    try:
        weight = exact_max_weight_matching(g).weight
    except InstanceTooLarge:
        weight = None
    bound = arboricity_upper(g)
    return {
        "n": g.n,
        "m": g.m,
        "weighted": bool(stream.weighted),
        "matching_size": matching_number(g),
        "matching_weight": weight,
        "arboricity": int(bound),
        "arboricity_kind": bound.kind,
    }


def exact_target(algo: str, exact: dict):
    return exact["matching_weight"] if algo == "combinator" else exact["matching_size"]


def run_estimator(algo: str, source: StreamFile | EdgeStream, *, seed: int = 0, with_exact: bool = False,
                  **options) -> RunReport:
    """Run one named estimator and wrap the outcome in a :class:`RunReport`.

    Estimator failures are reported (``failures``, ``estimate = null``)
    rather than raised; precondition warnings are listed in ``failures`` too.
    """
    if isinstance(source, EdgeStream):
        source = StreamFile(source.n, source.weighted, source.W, [source])
    est = build_estimator(algo, W=source.W, seed=seed, **options)
    config = {"algo": algo, **{k: options[k] for k in sorted(options)}}
    failures: list = []
    start = time.perf_counter()
    estimate = None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PreconditionWarning)
        try:
            est.fit_passes(source.replay(est.n_passes))
            estimate = float(est.estimate_)
        except EstimatorFailure as exc:
            failures.append({"type": type(exc).__name__, "message": str(exc)})
    elapsed = time.perf_counter() - start
    for w in caught:
        if issubclass(w.category, PreconditionWarning):
            failures.append({"type": "PreconditionWarning", "message": str(w.message)})
    details = _details(algo, est) if estimate is not None else {}
    exact = None
    if with_exact:
        exact = exact_target(algo, exact_values(source.stream))
    return RunReport(
        algorithm=algo, config=config, seed=seed, estimate=estimate, exact=exact,
        ratio=ratio_of(estimate, exact) if estimate is not None else None,
        words=est.words_ if hasattr(est, "n_") else {},
        subseeds={k: int(v) for k, v in getattr(est, "subseeds_", {}).items()},
        failures=failures, details=details, wall_time_s=elapsed,
    )


def _details(algo, est) -> dict:
    if algo == "combinator":
        return {"rank_report": est.report_.to_dict()}
    if algo == "arboricity":
        return {"branch": est.branch_, "T": est.T_, "C": est.C_, "k_threshold": est.k_threshold_,
                "doubling_value": est.doubling_value_, "factor": est.factor}
    return {"l0": est.l0_, "factor": est.factor}


def evaluate(runs: list[dict], exacts: list[dict]) -> dict:
    """Pair run reports with exact reports (by position) into a ratio table."""
    if len(runs) != len(exacts):
        raise ValueError(f"{len(runs)} run reports but {len(exacts)} exact reports")
    rows = []
    for r, e in zip(runs, exacts):
        target = exact_target(r["algorithm"], e)
        rows.append({"algorithm": r["algorithm"], "estimate": r["estimate"], "exact": target,
                     "ratio": ratio_of(r["estimate"], target)})
    ratios = [row["ratio"] for row in rows if row["ratio"] is not None]
    return {
        "rows": rows,
        "summary": {
            "count": len(rows),
            "evaluated": len(ratios),
            "min_ratio": min(ratios) if ratios else None,
            "max_ratio": max(ratios) if ratios else None,
            "all_at_most_one": all(x <= 1 for x in ratios),
        },
    }


def space_profile(ns, alpha: float = 3.0, eps: float = 0.1, passes: int = 1, seed: int = 0) -> dict:
    """Total words of the arboricity estimator against ``n`` and the fitted log-log slope.

    Each point runs the full estimator on a generated graph of arboricity at
    most ``alpha``.
    """
    words = []
    for k, n in enumerate(ns):
        stream = gen_bounded_arboricity(int(n), int(alpha), seed + k)
        est = ArboricityMatchingEstimator(alpha, eps, passes, random_state=seed + k)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PreconditionWarning)
            est.fit(stream)
        words.append(est.total_words_)
    slope = float(np.polyfit(np.log(np.asarray(ns, float)), np.log(np.asarray(words, float)), 1)[0])
    return {"n": [int(n) for n in ns], "words": words, "slope": slope}

