"""Sequential Bayesian evidence scoring for the AGI singularity metric."""

from singularity_metric.bayes import (
    LikelihoodPair,
    impact_factor,
    marginal,
    odds_of,
    posterior,
    prob_of,
    update_odds,
)
from singularity_metric.engine import (
    InvalidMatrixError,
    PosteriorTable,
    Trajectory,
    batch_posterior,
    run,
    singularity_metric,
    trajectory,
)
from singularity_metric.evidence import (
    AssessmentMatrix,
    Evidence,
    LevelSchedule,
    Sort,
    canonical_dataset,
    canonical_schedule,
    level_pair,
    validate_matrix,
)

__all__ = [
    "AssessmentMatrix",
    "Evidence",
    "InvalidMatrixError",
    "LevelSchedule",
    "LikelihoodPair",
    "PosteriorTable",
    "Sort",
    "Trajectory",
    "batch_posterior",
    "canonical_dataset",
    "canonical_schedule",
    "impact_factor",
    "level_pair",
    "marginal",
    "odds_of",
    "posterior",
    "prob_of",
    "run",
    "singularity_metric",
    "trajectory",
    "update_odds",
    "validate_matrix",
]

__version__ = "0.1.0"
