"""Weighted matching estimation from per-rank unweighted estimates.

Edges are split by rank. Instance ``i`` of an unweighted black box sees every
edge of rank ``>= i`` and estimates the matching size ``S_hat[i]`` of that
suffix graph. A downward scan keeps ranks whose estimate jumps by more than
a factor ``T`` over the last significant rank (good ranks) and, among those,
ranks whose increment is at least ``c`` times the last kept increment
(significant ranks). The answer is ``2/5 * sum_i 2^i R_hat[i]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..estimators.base import StreamEstimator, ThresholdedEstimate
from ..exceptions import EstimatorFailure
from .blackbox import BlackBox, resolve_black_box
from .ranks import ranks_of, representative


@dataclass(frozen=True)
class CombinatorParams:
    lam: Fraction
    T: Fraction
    c: Fraction


def combinator_params(lam) -> CombinatorParams:
    """``T = 8 lam^2 - 2 lam`` and ``c = 2/5 T + 5 lam``, as exact fractions."""
    lam = Fraction(lam)
    if lam < 1:
        raise ValueError("lam must be at least 1")
    T = 8 * lam * lam - 2 * lam
    return CombinatorParams(lam, T, Fraction(2, 5) * T + 5 * lam)


def lower_bound_divisor(lam) -> Fraction:
    """``D`` with ``w(M*) / D <= estimate`` when every black-box call honors its contract.

    Chain: the rank decomposition keeps ``1/8`` of the optimum, the
    significant-rank sum keeps ``1/(2 lam (1 + 2 lam T + 25 lam^2))`` of that,
    and the output is scaled by ``2/5``.
    """
    p = combinator_params(lam)
    return 8 * 2 * p.lam * (1 + 2 * p.lam * p.T + 25 * p.lam**2) * Fraction(5, 2)


def _as_fraction(value) -> Fraction:
    if isinstance(value, ThresholdedEstimate):
        value = value.value
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    return Fraction(float(value))


def _num(x: Fraction):
    return int(x) if x.denominator == 1 else float(x)


@dataclass(frozen=True)
class RankReport:
    """Outcome of the downward scan.

    ``S_raw`` keeps the black-box answers before non-good ranks are zeroed;
    ``last_trace[k]`` is the value of ``last`` when rank ``t-1-k`` was tested.
    """

    lam: Fraction
    T: Fraction
    c: Fraction
    t: int
    S_hat: tuple
    R_hat: tuple
    I_good: tuple
    I_sign: tuple
    last_trace: tuple
    estimate_exact: Fraction
    failure_budget: float
    S_raw: tuple = field(default=())

    @property
    def estimate(self) -> float:
        return float(self.estimate_exact)

    def recompute_estimate(self) -> Fraction:
        return Fraction(2, 5) * sum((representative(i) * self.R_hat[i] for i in self.I_sign), Fraction(0))

    def to_dict(self) -> dict:
        return {
            "lambda": _num(self.lam),
            "T": _num(self.T),
            "c": _num(self.c),
            "t": self.t,
            "S_hat": [_num(x) for x in self.S_hat],
            "R_hat": [_num(x) for x in self.R_hat],
            "I_good": list(self.I_good),
            "I_sign": list(self.I_sign),
            "estimate": self.estimate,
            "failure_budget": self.failure_budget,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def scan_ranks(S_raw, params: CombinatorParams, delta: float = 0.0) -> RankReport:
    """Run the good/significant scan on per-rank estimates ``S_raw[0..t]``."""
    S_raw = tuple(_as_fraction(x) for x in S_raw)
    t = len(S_raw) - 1
    if t < 0:
        return RankReport(params.lam, params.T, params.c, -1, (), (), (), (), (), Fraction(0), 0.0, ())
    S = list(S_raw)
    R = [Fraction(0)] * (t + 1)
    R[t] = S[t]
    last = t
    trace = []
    for i in range(t - 1, -1, -1):
        trace.append(last)
        if S[i] > S[last] * params.T:
            if S[i] - S[last] >= params.c * R[last]:
                R[i] = S[i] - S[last]
                last = i
        else:
            S[i] = Fraction(0)
    I_good = tuple(i for i in range(t, -1, -1) if S[i] != 0)
    I_sign = tuple(i for i in range(t, -1, -1) if R[i] != 0)
    est = Fraction(2, 5) * sum((representative(i) * R[i] for i in range(t + 1)), Fraction(0))
    return RankReport(params.lam, params.T, params.c, t, tuple(S), tuple(R), I_good, I_sign,
                      tuple(trace), est, float(delta) * (t + 1), S_raw)


class WeightedMatchingEstimator(StreamEstimator):
    """Estimate the maximum weight of a matching in a weighted dynamic stream.

    Parameters
    ----------
    blackbox : str or BlackBox
        ``"exact"``, ``"greedy"``, ``"tutte"`` or ``"arboricity"``, or a
        :class:`BlackBox` instance.
    W : int, optional
        Declared weight bound; heavier edges raise ``WeightOutOfRange``.
    lam : float, optional
        Overrides the black box's declared approximation factor.
    blackbox_params : dict, optional
        Keyword arguments for the named black box (e.g. ``alpha``, ``eps``).

    Instances are created lazily as higher ranks appear, and the top rank
    is read off at query time as the largest rank whose edge set is
    nonempty. ``report_`` holds the :class:`RankReport`; ``estimate_`` is
    its float estimate.
    """

    def __init__(self, blackbox="exact", W=None, lam=None, blackbox_params=None, random_state=None):
        self.blackbox = blackbox
        self.W = W
        self.lam = lam
        self.blackbox_params = blackbox_params
        self.random_state = random_state

    def _box(self) -> BlackBox:
        return resolve_black_box(self.blackbox, **(self.blackbox_params or {}))

    @property
    def n_passes(self):
        return self._box().n_passes

    def _begin(self, n):
        self.box_ = self._box()
        self.params_ = combinator_params(self.lam if self.lam is not None else self.box_.lam)
        self.instances_: list[StreamEstimator] = []
        self.rank_edges_ = np.zeros(0, dtype=np.int64)

    def _grow(self, top: int):
        while len(self.instances_) <= top:
            i = len(self.instances_)
            inst = self.box_.make(self._subseed(f"rank{i}"))
            inst.begin(self.n_)
            self.instances_.append(inst)
        if self.rank_edges_.size <= top:
            self.rank_edges_ = np.concatenate([self.rank_edges_, np.zeros(top + 1 - self.rank_edges_.size, np.int64)])

    def _update(self, chunk):
        if len(chunk) == 0:
            return
        r = ranks_of(chunk.w, self.W)
        top = int(r.max())
        if self.pass_ == 0:
            self._grow(top)
            np.add.at(self.rank_edges_, r, chunk.sign)
        elif top >= len(self.instances_):
            raise ValueError("a later pass contains a rank unseen in the first pass")
        for i, inst in enumerate(self.instances_):
            mask = r >= i
            if not mask.any():
                break
            inst.update(chunk.select(mask))

    def _end_pass(self, index):
        for i, inst in enumerate(self.instances_):
            try:
                inst.end_pass()
            except EstimatorFailure as exc:
                raise type(exc)(str(exc), rank=i) from exc
        return None

    def _finalize(self):
        nonempty = np.flatnonzero(self.rank_edges_ > 0)
        t = int(nonempty[-1]) if nonempty.size else -1
        raw = []
        for i in range(t + 1):
            try:
                raw.append(self.instances_[i].finalize())
            except EstimatorFailure as exc:
                raise type(exc)(str(exc), rank=i) from exc
        self.report_ = scan_ranks(raw, self.params_, self.box_.delta)
        return self.report_.estimate

    def _words(self):
        out = {"rank_counters": len(self.rank_edges_)}
        for i, inst in enumerate(getattr(self, "instances_", [])):
            for k, v in inst.words_.items():
                out[f"rank{i}.{k}"] = v
        return out


def run_combinator(stream, n=None, W=None, handle="exact", seed=None, lam=None, **blackbox_params) -> RankReport:
    est = WeightedMatchingEstimator(handle, W=W, lam=lam, blackbox_params=blackbox_params or None, random_state=seed)
    return est.fit(stream, n_vertices=n).report_
