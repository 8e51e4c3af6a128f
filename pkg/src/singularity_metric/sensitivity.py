"""How much the aggregate metric moves when the subjective inputs move.

Two probes:

* ``perturb_metric`` -- Monte Carlo over jittered level schedules.
* ``tornado`` -- one-at-a-time shifts of each cell up and down the level
  ladder.

Randomness comes from numpy's PCG64.  Sample ``i`` draws from its own
stream, seeded by ``SeedSequence(seed, spawn_key=(i,))``, so a report
depends only on ``(seed, samples, delta)`` and not on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from singularity_metric.bayes import LikelihoodPair
from singularity_metric.engine import InvalidMatrixError, fast_metric
from singularity_metric.evidence import AssessmentMatrix, LevelSchedule, validate_matrix

QUANTILE_LEVELS = (0.05, 0.25, 0.50, 0.75, 0.95)

# given_h stays in [0.5, 0.999] for complementary pairs so every level
# keeps ratio >= 1 and a finite likelihood ratio.
GIVEN_H_CEILING = 0.999

# Levels that encode "no bearing" are definitional, not subjective.
FIXED_LEVELS = frozenset({"irrelevant"})


@dataclass(frozen=True)
class PerturbationSpec:
    delta: float
    samples: int
    seed: int = 0

    def __post_init__(self):
        if not (self.delta >= 0 and math.isfinite(self.delta)):
            raise ValueError(f"delta must be a finite non-negative number, got {self.delta!r}")
        if isinstance(self.samples, bool) or not isinstance(self.samples, int) or self.samples < 1:
            raise ValueError(f"samples must be a positive integer, got {self.samples!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass(frozen=True)
class TornadoEntry:
    sort_id: str
    evidence_id: str
    direction: str  # "up" or "down"
    from_level: str
    to_level: str
    delta: float


@dataclass(frozen=True)
class SensitivityReport:
    metric_mean: float
    metric_sd: float
    quantiles: dict[float, float]
    tornado: tuple[TornadoEntry, ...] = ()
    samples: int = 0
    delta: float = 0.0
    seed: Optional[int] = None
    baseline: Optional[float] = None
    metrics: tuple[float, ...] = field(default=(), repr=False)


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for sample ``index`` of a run seeded with ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def perturb_schedule(schedule: LevelSchedule, delta: float, rng: np.random.Generator) -> LevelSchedule:
    """Shift each level's P(e|h) uniformly within +/- delta.

    Complementary pairs keep ``given_not_h = 1 - given_h``; other pairs keep
    their ``given_not_h``.  Shifted values are clamped so the ratio stays at
    least 1.  Draws happen in ladder order, one per non-fixed level.
    """
    pairs = {}
    for name, pair in schedule.levels.items():
        if name in FIXED_LEVELS:
            continue
        shift = rng.uniform(-delta, delta) if delta > 0 else 0.0
        if pair.is_complementary:
            given_h = min(max(pair.given_h + shift, 0.5), GIVEN_H_CEILING)
            pairs[name] = LikelihoodPair.complementary(given_h) if shift else pair
        else:
            given_h = min(max(pair.given_h + shift, pair.given_not_h), 1.0)
            pairs[name] = LikelihoodPair(given_h, pair.given_not_h)
    return schedule.with_pairs(pairs)


def _check(m: AssessmentMatrix) -> None:
    violations = validate_matrix(m)
    if violations:
        raise InvalidMatrixError(violations)


def _summary(values: list[float]) -> tuple[float, float]:
    # Shifted sums: identical inputs give exactly that value and sd 0.
    anchor = values[0]
    n = len(values)
    mean = anchor + math.fsum(v - anchor for v in values) / n
    if n < 2:
        return mean, 0.0
    sd = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1))
    return mean, sd


def perturb_metric(m: AssessmentMatrix, spec: PerturbationSpec) -> SensitivityReport:
    """Monte Carlo distribution of the metric under schedule jitter.

    Raises:
        InvalidMatrixError: if ``m`` is invalid.
    """
    _check(m)
    baseline = fast_metric(m)
    metrics = []
    for i in range(spec.samples):
        schedule = perturb_schedule(m.schedule, spec.delta, sample_rng(spec.seed, i))
        metrics.append(fast_metric(m.with_schedule(schedule)))
    mean, sd = _summary(metrics)
    qs = np.quantile(np.asarray(metrics), QUANTILE_LEVELS)
    return SensitivityReport(
        metric_mean=mean,
        metric_sd=sd,
        quantiles={level: float(q) for level, q in zip(QUANTILE_LEVELS, qs)},
        samples=spec.samples,
        delta=spec.delta,
        seed=spec.seed,
        baseline=baseline,
        metrics=tuple(metrics),
    )


def tornado(m: AssessmentMatrix) -> SensitivityReport:
    """Metric change from moving each cell one rung up and down the ladder.

    Moves saturate at the ends of the ladder (delta 0).  Cells carrying a
    raw-pair override are not on the ladder and are skipped.  Entries are
    sorted by decreasing ``|delta|``; ties keep sort/evidence/up-down order.
    """
    _check(m)
    ladder = m.schedule.ladder()
    baseline = fast_metric(m)
    entries = []
    for sid in m.sort_ids:
        for eid in m.evidence_ids:
            if (sid, eid) in m.overrides:
                continue
            level = m.schedule.resolve(m.cells[(sid, eid)])
            rung = ladder.index(level)
            for direction, target in (("up", min(rung + 1, len(ladder) - 1)), ("down", max(rung - 1, 0))):
                to_level = ladder[target]
                delta = 0.0 if target == rung else fast_metric(m.with_cell(sid, eid, to_level)) - baseline
                entries.append(TornadoEntry(sid, eid, direction, level, to_level, delta))
    entries.sort(key=lambda e: -abs(e.delta))
    return SensitivityReport(
        metric_mean=0.0,
        metric_sd=0.0,
        quantiles={level: 0.0 for level in QUANTILE_LEVELS},
        tornado=tuple(entries),
        baseline=baseline,
    )
