"""Single-step Bayesian updating for a binary hypothesis.

Probabilities and odds are plain floats.  Every public function validates
its inputs and raises ``ValueError`` on anything outside the domain, so a
float that made it through one of these calls is a valid probability.

Updating is done in odds form: ``odds(h|e) = odds(h) * P(e|h) / P(e|~h)``.
Chained updates then compose by multiplication, which keeps long chains
accurate close to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def check_probability(p: float, name: str = "probability") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:  # also rejects NaN
        raise ValueError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def check_odds(o: float, name: str = "odds") -> float:
    o = float(o)
    if not o >= 0.0:
        raise ValueError(f"{name} must be non-negative, got {o!r}")
    return o


@dataclass(frozen=True)
class LikelihoodPair:
    """How likely one piece of evidence is under ``h`` and under ``~h``.

    Attributes:
        given_h: P(e|h), in (0, 1].
        given_not_h: P(e|~h), in (0, 1].
    """

    given_h: float
    given_not_h: float

    def __post_init__(self):
        for name in ("given_h", "given_not_h"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise TypeError(f"{name} must be a real number, got {value!r}")
            if not 0.0 < value <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {value!r}")
            object.__setattr__(self, name, float(value))

    def ratio(self) -> float:
        """Likelihood ratio (Bayes factor) ``P(e|h) / P(e|~h)``."""
        return self.given_h / self.given_not_h

    @property
    def is_complementary(self) -> bool:
        return math.isclose(self.given_h + self.given_not_h, 1.0, rel_tol=0, abs_tol=1e-12)

    @classmethod
    def complementary(cls, given_h: float) -> "LikelihoodPair":
        return cls(given_h, 1.0 - given_h)


def odds_of(p: float) -> float:
    """Convert a probability to odds ``p / (1 - p)``; ``inf`` for ``p == 1``."""
    p = check_probability(p)
    if p == 1.0:
        return math.inf
    return p / (1.0 - p)


def prob_of(o: float) -> float:
    """Convert odds back to a probability ``o / (1 + o)``; 1 for infinite odds."""
    o = check_odds(o)
    if math.isinf(o):
        return 1.0
    return o / (1.0 + o)


def update_odds(o: float, lr: float) -> float:
    """Multiply odds by a likelihood ratio."""
    o = check_odds(o)
    lr = float(lr)
    if not (lr > 0.0 and math.isfinite(lr)):
        raise ValueError(f"likelihood ratio must be positive and finite, got {lr!r}")
    if o == 0.0 or math.isinf(o):
        return o
    return o * lr


def posterior(prior: float, lik: LikelihoodPair) -> float:
    """Belief in ``h`` after observing evidence with likelihoods ``lik``.

    Equivalent to ``P(e|h)P(h) / (P(e|h)P(h) + P(e|~h)(1 - P(h)))``.  The
    endpoints 0 and 1 are absorbing and uninformative evidence (equal
    likelihoods) returns the prior untouched.
    """
    prior = check_probability(prior, "prior")
    if prior in (0.0, 1.0) or lik.given_h == lik.given_not_h:
        return prior
    return prob_of(update_odds(odds_of(prior), lik.ratio()))


def marginal(prior: float, lik: LikelihoodPair) -> float:
    """Total probability of the evidence, ``P(e|h)P(h) + P(e|~h)P(~h)``."""
    prior = check_probability(prior, "prior")
    # Written so equal likelihoods give exactly that likelihood back.
    return lik.given_not_h + (lik.given_h - lik.given_not_h) * prior


def impact_factor(prior: float, lik: LikelihoodPair) -> float:
    """Multiplicative effect of the evidence on belief, ``P(e|h) / P(e)``.

    ``posterior(prior, lik) == prior * impact_factor(prior, lik)``.  The
    factor shrinks as the evidence becomes more expected a priori.

    Raises:
        ValueError: if the marginal probability of the evidence is zero.
    """
    m = marginal(prior, lik)
    if m <= 0.0:
        raise ValueError("impact factor undefined: evidence has zero marginal probability")
    return lik.given_h / m
