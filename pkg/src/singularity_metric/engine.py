"""Per-sort belief trajectories, the posterior table and the aggregate metric."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from singularity_metric.bayes import check_probability, odds_of, prob_of, update_odds
from singularity_metric.evidence import AssessmentMatrix, Sort, validate_matrix

UNIVERSAL_PRIOR = 0.5


class InvalidMatrixError(ValueError):
    """Raised when an assessment matrix fails validation."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("invalid assessment matrix:\n  " + "\n  ".join(self.violations))


@dataclass(frozen=True)
class Trajectory:
    sort_id: str
    posteriors: tuple[float, ...]
    prior: float = UNIVERSAL_PRIOR

    @property
    def final(self) -> float:
        return self.posteriors[-1] if self.posteriors else self.prior


@dataclass(frozen=True)
class PosteriorTable:
    """Cumulative posteriors for every sort plus the aggregate metric.

    ``trajectories[i].posteriors[k]`` is the belief in sort ``i`` after
    evidences ``1..k+1``.  All values are unrounded.
    """

    sort_ids: tuple[str, ...]
    evidence_ids: tuple[str, ...]
    trajectories: tuple[Trajectory, ...]
    finals: tuple[float, ...]
    metric: float

    def cell(self, sort_id: str, evidence_id: str) -> float:
        i = self.sort_ids.index(sort_id)
        k = self.evidence_ids.index(evidence_id)
        return self.trajectories[i].posteriors[k]


def _check(m: AssessmentMatrix) -> None:
    violations = validate_matrix(m)
    if violations:
        raise InvalidMatrixError(violations)


def _sort_id(sort: Union[Sort, str]) -> str:
    return sort.id if isinstance(sort, Sort) else sort


def _fold(m: AssessmentMatrix, sort_id: str, prior: float) -> tuple[float, ...]:
    odds = odds_of(prior)
    out = []
    for pair in m.sort_pairs(sort_id):
        odds = update_odds(odds, pair.ratio())
        out.append(prob_of(odds))
    return tuple(out)


def trajectory(sort: Union[Sort, str], m: AssessmentMatrix, prior: float = UNIVERSAL_PRIOR) -> Trajectory:
    """Fold Bayes' rule over one sort's cells in evidence order.

    Element ``k`` of the result is the belief after the first ``k + 1``
    evidences, starting from ``prior``.

    Raises:
        InvalidMatrixError: if ``m`` fails validation.
        KeyError: if the sort is not in ``m``.
    """
    _check(m)
    sid = m.get_sort(_sort_id(sort)).id
    prior = check_probability(prior, "prior")
    return Trajectory(sid, _fold(m, sid, prior), prior)


def batch_posterior(sort: Union[Sort, str], m: AssessmentMatrix, prior: float = UNIVERSAL_PRIOR) -> float:
    """One-shot posterior from the product of all of a sort's likelihood ratios.

    Under per-evidence independence this equals the last element of
    ``trajectory(sort, m)``.
    """
    _check(m)
    sid = m.get_sort(_sort_id(sort)).id
    lr = math.prod(pair.ratio() for pair in m.sort_pairs(sid))
    return prob_of(update_odds(odds_of(check_probability(prior, "prior")), lr))


def singularity_metric(table: PosteriorTable, weights: Optional[Sequence[float]] = None) -> float:
    """Mean of the per-sort final posteriors (uniform weights by default)."""
    return _mean(table.finals, weights)


def _mean(finals: Sequence[float], weights: Optional[Sequence[float]] = None) -> float:
    if not finals:
        raise ValueError("cannot aggregate an empty table")
    if weights is None:
        return math.fsum(finals) / len(finals)
    if len(weights) != len(finals) or any(w < 0 for w in weights) or not sum(weights) > 0:
        raise ValueError("weights must be non-negative, one per sort, and not all zero")
    return math.fsum(w * f for w, f in zip(weights, finals)) / math.fsum(weights)


def run(
    m: AssessmentMatrix,
    prior: float = UNIVERSAL_PRIOR,
    weights: Optional[Sequence[float]] = None,
) -> PosteriorTable:
    """Compute every sort's trajectory and the aggregate metric.

    Raises:
        InvalidMatrixError: carrying the violation list when ``m`` is invalid.
    """
    _check(m)
    prior = check_probability(prior, "prior")
    trajectories = tuple(Trajectory(sid, _fold(m, sid, prior), prior) for sid in m.sort_ids)
    finals = tuple(t.final for t in trajectories)
    return PosteriorTable(
        sort_ids=tuple(m.sort_ids),
        evidence_ids=tuple(m.evidence_ids),
        trajectories=trajectories,
        finals=finals,
        metric=_mean(finals, weights),
    )


def fast_metric(m: AssessmentMatrix, prior: float = UNIVERSAL_PRIOR) -> float:
    """Aggregate metric of an already-validated matrix, skipping validation.

    Gives the same value as ``run(m, prior).metric``; used in tight loops.
    """
    return _mean([_fold(m, sid, prior)[-1] if m.evidences else prior for sid in m.sort_ids])
