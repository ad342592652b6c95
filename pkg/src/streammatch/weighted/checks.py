"""Inequality-level checks of a combinator run against the greedy decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..graph import GraphSnapshot
from ..matching import matching_number
from .combinator import CombinatorParams, RankReport, combinator_params
from .reference import GroundTruthDecomposition


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: tuple = ()

    def __bool__(self):
        return self.passed


def _first_failure(name, cases):
    """``cases`` yields ``(ok, witness)``; keep the first failing witness."""
    for ok, witness in cases:
        if not ok:
            return CheckResult(name, False, witness)
    return CheckResult(name, True)


def check_report_structure(report: RankReport) -> list[CheckResult]:
    """Checks that hold by construction of the scan, whatever the black box did."""
    S, R, T, c = report.S_hat, report.R_hat, report.T, report.c
    good, sign = list(report.I_good), list(report.I_sign)
    out = [
        CheckResult("structure.descending", all(a > b for a, b in zip(good, good[1:])) and
                    all(a > b for a, b in zip(sign, sign[1:]))),
        CheckResult("structure.sign_subset_good", set(sign) <= set(good), tuple(sorted(set(sign) - set(good)))),
        # a zero answer at the top rank leaves it out of both sets
        CheckResult("structure.top_rank",
                    report.t < 0 or S[report.t] == 0 or (good[:1] == [report.t] and sign[:1] == [report.t]),
                    (report.t, tuple(good[:1]), tuple(sign[:1]))),
        CheckResult("structure.estimate_identity", report.recompute_estimate() == report.estimate_exact),
        _first_failure("scan.significant_S_growth", (
            (S[a] > T * S[b], (a, b)) for k, b in enumerate(sign) for a in sign[k + 1:])),
        _first_failure("scan.significant_R_growth", (
            (R[a] >= c * R[b], (a, b)) for k, b in enumerate(sign) for a in sign[k + 1:])),
        _first_failure("scan.good_below_significant", (
            (S[g] > T * S[s], (g, s)) for s in sign for g in good if g < s)),
    ]
    return out


def check_rank_structure(report: RankReport, truth: GroundTruthDecomposition,
                         lam=None, params: CombinatorParams | None = None) -> list[CheckResult]:
    """Evaluate every quantified inequality of the analysis on one run.

    The data-structure facts are checked on the report alone. The remaining
    checks compare the report with ``truth``: the per-rank sandwich
    ``S_i / lam <= S_raw_i <= 2 S_i``; the block bracket
    ``D/(2 lam) < S_hat[g] - S_hat[s] < 5/2 D`` for good ranks ``g`` below
    significant ``s``; the same bracket for each ``R_hat`` against its block
    ``D_l``; the growth ``D_{l+1} >= c/(5 lam) D_l``; the charging bound
    ``(2 lam T + 25 lam^2) D_l`` on the gaps between significant ranks; and the
    two-sided bound on ``sum r_i |M_i|`` in terms of ``sum r D``. Each result
    carries the indices of the first violation.
    """
    params = params or combinator_params(lam if lam is not None else report.lam)
    lam, T = params.lam, params.T
    out = check_report_structure(report)
    if report.t != truth.t:
        out.append(CheckResult("truth.same_top_rank", False, (report.t, truth.t)))
        return out
    if report.t < 0:
        return out
    S, sizes, St = report.S_hat, truth.sizes, truth.S
    sign = list(report.I_sign)
    raw = report.S_raw or report.S_hat
    out.append(_first_failure("truth.per_rank_sandwich", (
        (St[i] / lam <= raw[i] <= 2 * St[i], (i,)) for i in range(report.t + 1))))

    # position of the last significant rank above i (I_sign(l) > i >= I_sign(l+1))
    def owner(i):
        above = [s for s in sign if s > i]
        return above[-1] if above else None

    brackets = []
    for g in report.I_good:
        s = owner(g)
        if s is None:
            continue
        block = Fraction(truth.block_sum(g, s))
        diff = S[g] - S[s]
        brackets.append((block / (2 * lam) < diff < Fraction(5, 2) * block, (g, s)))
    out.append(_first_failure("truth.block_bracket", brackets))

    D = [Fraction(x) for x in truth.D(sign)]
    R = report.R_hat
    out.append(_first_failure("truth.R_bracket", (
        (D[k] / (2 * lam) <= R[s] <= Fraction(5, 2) * D[k], (s,)) for k, s in enumerate(sign))))
    out.append(_first_failure("truth.D_growth", (
        (D[k + 1] >= params.c / (5 * lam) * D[k], (sign[k], sign[k + 1])) for k in range(len(sign) - 1))))

    bound = 2 * lam * T + 25 * lam**2
    charge = [(truth.block_sum(sign[k + 1] + 1, sign[k]) <= bound * D[k], (sign[k], sign[k + 1]))
              for k in range(len(sign) - 1)]
    if sign and sign[-1] != 0:
        charge.append((truth.block_sum(0, sign[-1]) <= bound * D[-1], (sign[-1], 0)))
    out.append(_first_failure("truth.charging", charge))

    total = Fraction(truth.rounded_weight)
    rd = sum((Fraction(1 << s) * D[k] for k, s in enumerate(sign)), Fraction(0))
    out.append(CheckResult("truth.weight_sandwich", rd <= total <= (1 + bound) * rd, (float(rd), float(total))))
    return out


def black_box_contract(report: RankReport, g: GraphSnapshot, lam=None) -> list[int]:
    """Ranks whose raw estimate violates ``nu_i / lam <= S_raw_i <= nu_i``.

    ``nu_i`` is the maximum matching size of the subgraph of rank ``>= i``.
    """
    lam = Fraction(lam if lam is not None else report.lam)
    bad = []
    for i in range(report.t + 1):
        sub = GraphSnapshot(g.n, frozenset(e for e in g.edges if e.w >= (1 << i)))
        nu = matching_number(sub)
        if not (nu / lam <= report.S_raw[i] <= nu):
            bad.append(i)
    return bad
