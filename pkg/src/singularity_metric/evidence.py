"""Sorts, evidences, support levels and the canonical assessment matrix.

A matrix assigns every (sort, evidence) cell a named support level.  The
level schedule turns names into likelihood pairs; it ships as data
(``data/levels.toml``) so alternative calibrations can be swapped in.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from typing import Mapping, Optional

from singularity_metric import _toml
from singularity_metric.bayes import LikelihoodPair

CANONICAL_LEVEL_NAMES = (
    "irrelevant",
    "weak",
    "possibility",
    "feasibility",
    "strong",
    "desirability",
    "very-strong",
    "near-certain",
)

Cell = tuple[str, str]

@dataclass(frozen=True)
class Sort:
    id: str
    name: str
    description: str = ""


@dataclass(frozen=True)
class Evidence:
    id: str
    name: str
    year: Optional[int] = None
    description: str = ""


@dataclass(frozen=True)
class LevelSchedule:
    """Ordered map from support-level name to likelihood pair.

    ``levels`` must be listed by strictly increasing likelihood ratio.
    ``aliases`` maps extra names onto existing levels (they share the pair
    but are not rungs of the ladder).
    """

    levels: Mapping[str, LikelihoodPair]
    aliases: Mapping[str, str] = field(default_factory=dict)

    def __contains__(self, name: object) -> bool:
        return name in self.levels or name in self.aliases

    def resolve(self, name: str) -> str:
        """Return the ladder level a name (possibly an alias) refers to."""
        if name in self.levels:
            return name
        if name in self.aliases and self.aliases[name] in self.levels:
            return self.aliases[name]
        raise KeyError(f"unknown support level {name!r}")

    def pair(self, name: str) -> LikelihoodPair:
        return self.levels[self.resolve(name)]

    def ladder(self) -> list[str]:
        """Level names from weakest to strongest."""
        return list(self.levels)

    def ratios(self) -> list[float]:
        return [pair.ratio() for pair in self.levels.values()]

    def violations(self) -> list[str]:
        problems = []
        names = list(self.levels)
        for name in CANONICAL_LEVEL_NAMES:
            if name not in self:
                problems.append(f"schedule: missing level {name!r}")
        for name, target in self.aliases.items():
            if name in self.levels:
                problems.append(f"schedule: alias {name!r} shadows a level")
            elif target not in self.levels:
                problems.append(f"schedule: alias {name!r} points at unknown level {target!r}")
        for name, pair in self.levels.items():
            if pair.ratio() < 1.0:
                problems.append(f"schedule: level {name!r} has ratio {pair.ratio():.6g} < 1")
        if "irrelevant" in self and self.pair("irrelevant").ratio() != 1.0:
            problems.append("schedule: level 'irrelevant' must have ratio exactly 1")
        ratios = self.ratios()
        for (lo, r_lo), (hi, r_hi) in zip(zip(names, ratios), zip(names[1:], ratios[1:])):
            if not r_hi > r_lo:
                problems.append(
                    f"schedule: ratios not strictly increasing at {lo!r} ({r_lo:.6g}) -> {hi!r} ({r_hi:.6g})"
                )
        return problems

    def with_pairs(self, pairs: Mapping[str, LikelihoodPair]) -> "LevelSchedule":
        """Copy of the schedule with some levels' pairs replaced."""
        levels = {name: pairs.get(name, pair) for name, pair in self.levels.items()}
        return LevelSchedule(levels, dict(self.aliases))


@dataclass(frozen=True)
class AssessmentMatrix:
    """Sorts x evidences grid of support-level names.

    ``cells`` is keyed by ``(sort_id, evidence_id)``.  ``overrides`` may pin
    a raw likelihood pair on individual cells, taking precedence over the
    named level.  Instances are treated as immutable; use the ``with_*``
    helpers to derive modified copies.
    """

    sorts: tuple[Sort, ...]
    evidences: tuple[Evidence, ...]
    cells: Mapping[Cell, str]
    schedule: LevelSchedule
    overrides: Mapping[Cell, LikelihoodPair] = field(default_factory=dict)
    notes: str = ""

    @property
    def sort_ids(self) -> list[str]:
        return [s.id for s in self.sorts]

    @property
    def evidence_ids(self) -> list[str]:
        return [e.id for e in self.evidences]

    def get_sort(self, sort_id: str) -> Sort:
        for s in self.sorts:
            if s.id == sort_id:
                return s
        raise KeyError(f"unknown sort {sort_id!r}")

    def cell_pair(self, sort_id: str, evidence_id: str) -> LikelihoodPair:
        key = (sort_id, evidence_id)
        if key in self.overrides:
            return self.overrides[key]
        return self.schedule.pair(self.cells[key])

    def sort_pairs(self, sort_id: str) -> list[LikelihoodPair]:
        """Likelihood pairs of one sort's cells, in evidence order."""
        return [self.cell_pair(sort_id, ev) for ev in self.evidence_ids]

    def with_cell(self, sort_id: str, evidence_id: str, level: str) -> "AssessmentMatrix":
        cells = dict(self.cells)
        cells[(sort_id, evidence_id)] = level
        return replace(self, cells=cells)

    def with_schedule(self, schedule: LevelSchedule) -> "AssessmentMatrix":
        return replace(self, schedule=schedule)


def level_pair(name: str, schedule: Optional[LevelSchedule] = None) -> LikelihoodPair:
    """Likelihood pair for a support level (aliases allowed).

    Raises:
        KeyError: if the name is not in the schedule.
    """
    if schedule is None:
        schedule = canonical_schedule()
    return schedule.pair(name)


def validate_matrix(m: AssessmentMatrix) -> list[str]:
    """List every invariant the matrix breaks; empty means valid.  Never raises."""
    problems = list(m.schedule.violations())

    sort_ids = [s.id for s in m.sorts]
    ev_ids = [e.id for e in m.evidences]
    if not sort_ids:
        problems.append("matrix has no sorts")
    for kind, ids in (("sort", sort_ids), ("evidence", ev_ids)):
        seen = set()
        for i in ids:
            if i in seen:
                problems.append(f"duplicate {kind} id {i!r}")
            seen.add(i)
    for position, sid in enumerate(sort_ids, start=1):
        if sid != f"S{position}":
            problems.append(f"sort ids not contiguous: position {position} holds {sid!r}, expected 'S{position}'")
            break

    known_sorts, known_evs = set(sort_ids), set(ev_ids)
    for sid in sort_ids:
        for eid in ev_ids:
            if (sid, eid) not in m.cells and (sid, eid) not in m.overrides:
                problems.append(f"missing cell ({sid}, {eid})")
    for (sid, eid), level in m.cells.items():
        if sid not in known_sorts or eid not in known_evs:
            problems.append(f"cell ({sid}, {eid}) outside the matrix")
        elif level not in m.schedule:
            problems.append(f"unknown level {level!r} at cell ({sid}, {eid})")
    for (sid, eid), pair in m.overrides.items():
        if sid not in known_sorts or eid not in known_evs:
            problems.append(f"override ({sid}, {eid}) outside the matrix")
        elif pair.ratio() < 1.0:
            problems.append(f"override at cell ({sid}, {eid}) has ratio {pair.ratio():.6g} < 1")
    return problems


def parse_schedule(data: Mapping) -> LevelSchedule:
    """Build a schedule from ``{"levels": {name: {given_h, given_not_h}}, "aliases": {...}}``.

    Raises:
        ValueError: if the structure or any pair is invalid.
    """
    levels_data, aliases = data.get("levels"), data.get("aliases", {})
    if not isinstance(levels_data, Mapping) or not isinstance(aliases, Mapping):
        raise ValueError("schedule needs a 'levels' table (and optionally an 'aliases' table)")
    levels = {}
    for name, spec in levels_data.items():
        try:
            levels[name] = LikelihoodPair(spec["given_h"], spec["given_not_h"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"level {name!r} needs numeric given_h and given_not_h") from exc
        except ValueError as exc:
            raise ValueError(f"level {name!r}: {exc}") from None
    return LevelSchedule(levels, dict(aliases))


@lru_cache(maxsize=None)
def canonical_schedule() -> LevelSchedule:
    """The shipped level schedule (ratios 1, 1.5, 3, 4, 17/3, 9, 19, 49)."""
    text = resources.files("singularity_metric.data").joinpath("levels.toml").read_text("utf-8")
    return parse_schedule(_toml.loads(text))


# Nine capability sorts and seven AI milestones of the canonical dataset.
_SORTS = (
    ("Holism", "Integrating lower-level intelligent components into a higher-level intelligence."),
    ("Troubleshooting", "Solving problems."),
    ("Learning", "Continuous knowledge acquisition from every source, merged into one coherent whole."),
    ("Creativity", "Imagination, intuition and invention."),
    ("Teleology", "Pursuit of purposes."),
    ("Reasoning and inference", "Abductive, deductive and inductive reasoning."),
    ("Proactivity", "Taking the initiative to spot interesting problems."),
    ("Enantiodromia", "Getting past apparent logical contradictions."),
    ("Disambiguation", "Passing the Turing test via Winograd schema challenges."),
)

_EVIDENCES = (
    ("Deep Blue", 1997, "Beat Kasparov at chess; stands for all rule-governed, algorithmic domains."),
    ("DeepMind Atari", 2014, "Deep RL from scratch found an unforeseen high-scoring Breakout strategy."),
    ("AlphaGo", 2016, "Beat Lee Sedol at Go with the unexpected move 37, mixing deep learning and search."),
    ("AlphaZero", 2017, "Self-play from scratch beat AlphaGo and the strongest chess engine."),
    ("Libratus", 2017, "Beat four professionals at heads-up no-limit Texas hold'em over 20 days."),
    ("EQP / Robbins", 1996, "Automated prover EQP settled the open Robbins conjecture."),
    ("Watson", 2011, "Won Jeopardy! against the two record-holding human champions."),
)

_IRR = "irrelevant"
_CANONICAL_CELLS = {
    "S1": (_IRR, "feasibility", "strong", _IRR, _IRR, _IRR, _IRR),
    "S2": ("desirability", "strong", "desirability", "very-strong", "desirability", "near-certain", _IRR),
    "S3": (_IRR, "very-strong", "desirability", "decisive", _IRR, _IRR, _IRR),
    "S4": (_IRR, "desirability", "desirability", "decisive", "feasibility", "feasibility", _IRR),
    "S5": ("feasibility", _IRR, "feasibility", "desirability", "feasibility", _IRR, _IRR),
    "S6": (_IRR, _IRR, "feasibility", "feasibility", _IRR, "strong", "desirability"),
    "S7": (_IRR,) * 7,
    "S8": (_IRR,) * 7,
    "S9": (_IRR,) * 6 + ("weak",),
}

CANONICAL_NOTES = """\
Curation rules behind the evidence list:
- Diversity over volume: evidence of one kind has diminishing returns, so all
  algorithmic game results are folded into a single Deep Blue entry.
- Systems with related names (AlphaGo, AlphaZero) count separately when they
  demonstrate different things.
- The list is a snapshot of well-accepted AI milestones and is meant to grow.
Sorts without bearing evidence stay at the neutral 0.5 prior."""


def canonical_dataset() -> AssessmentMatrix:
    """The 9-sort x 7-evidence matrix that reproduces the published table."""
    sorts = tuple(Sort(f"S{i}", name, desc) for i, (name, desc) in enumerate(_SORTS, start=1))
    evidences = tuple(
        Evidence(f"Ev{i}", name, year, desc) for i, (name, year, desc) in enumerate(_EVIDENCES, start=1)
    )
    cells = {
        (sid, f"Ev{k}"): level
        for sid, levels in _CANONICAL_CELLS.items()
        for k, level in enumerate(levels, start=1)
    }
    return AssessmentMatrix(sorts, evidences, cells, canonical_schedule(), {}, CANONICAL_NOTES)
