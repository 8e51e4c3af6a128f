"""Reading and writing assessment-matrix datasets (TOML, schema version 1).

Layout::

    schema_version = "1"
    notes = "free text"

    [[sorts]]
    id = "S1"
    name = "Holism"
    description = "..."

    [[evidences]]
    id = "Ev1"
    name = "Deep Blue"
    year = 1997            # optional

    [levels.feasibility]
    given_h = 0.75
    given_not_h = 0.25

    [aliases]               # optional
    possibility = "irrelevant"

    [cells.S1]
    Ev1 = "irrelevant"

    [overrides.S9]          # optional raw pairs per cell
    Ev7 = { given_h = 0.6, given_not_h = 0.4 }

The structural schema is ``data/dataset.schema.json``; unknown keys are
rejected.  Semantic checks are the ones in ``validate_matrix``.
"""

from __future__ import annotations

import json
import os
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional, Union

import jsonschema

from singularity_metric import _toml
from singularity_metric.bayes import LikelihoodPair
from singularity_metric.evidence import (
    AssessmentMatrix,
    Evidence,
    Sort,
    canonical_dataset,
    parse_schedule,
    validate_matrix,
)

SCHEMA_VERSION = "1"
SUPPORTED_VERSIONS = ("1",)
DATASET_ENV_VAR = "SINGULARITY_METRIC_DATASET"


class DatasetError(ValueError):
    """A dataset document could not be loaded; ``errors`` lists every problem."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


@lru_cache(maxsize=None)
def dataset_schema() -> dict:
    text = resources.files("singularity_metric.data").joinpath("dataset.schema.json").read_text("utf-8")
    return json.loads(text)


def _location(error: jsonschema.ValidationError) -> str:
    return "/".join(str(p) for p in error.absolute_path) or "<root>"


def load_dataset(text: str) -> AssessmentMatrix:
    """Parse and validate a dataset document.

    Raises:
        DatasetError: on a syntax error (with line and column), an
            unsupported ``schema_version``, a schema violation, or any
            ``validate_matrix`` violation.  No partial matrix is returned.
    """
    if not text.strip():
        raise DatasetError(["syntax error: empty document (at line 1, column 1)"])
    try:
        data = _toml.loads(text)
    except _toml.TOMLDecodeError as exc:
        msg = getattr(exc, "msg", str(exc))
        if getattr(exc, "lineno", None) is not None:
            msg = f"{msg} (at line {exc.lineno}, column {exc.colno})"
        raise DatasetError([f"syntax error: {msg}"]) from None

    version = data.get("schema_version")
    if version not in SUPPORTED_VERSIONS:
        raise DatasetError(
            [f"unsupported schema_version {version!r}; supported: {', '.join(SUPPORTED_VERSIONS)}"]
        )
    validator = jsonschema.Draft202012Validator(dataset_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        raise DatasetError([f"schema error at {_location(e)}: {e.message}" for e in errors])

    sorts = tuple(Sort(s["id"], s["name"], s.get("description", "")) for s in data["sorts"])
    evidences = tuple(
        Evidence(e["id"], e["name"], e.get("year"), e.get("description", "")) for e in data["evidences"]
    )
    problems = []
    try:
        schedule = parse_schedule(data)
    except ValueError as exc:
        raise DatasetError([str(exc)]) from None
    cells = {(sid, eid): level for sid, row in data["cells"].items() for eid, level in row.items()}
    overrides = {}
    for sid, row in data.get("overrides", {}).items():
        for eid, spec in row.items():
            try:
                overrides[(sid, eid)] = LikelihoodPair(spec["given_h"], spec["given_not_h"])
            except ValueError as exc:
                problems.append(f"override ({sid}, {eid}): {exc}")
    if problems:
        raise DatasetError(problems)

    m = AssessmentMatrix(sorts, evidences, cells, schedule, overrides, data.get("notes", ""))
    violations = validate_matrix(m)
    if violations:
        raise DatasetError(violations)
    return m


def _pair(pair: LikelihoodPair) -> dict:
    return {"given_h": pair.given_h, "given_not_h": pair.given_not_h}


def to_document(m: AssessmentMatrix) -> dict:
    doc: dict = {"schema_version": SCHEMA_VERSION}
    if m.notes:
        doc["notes"] = m.notes
    doc["sorts"] = [{"id": s.id, "name": s.name, "description": s.description} for s in m.sorts]
    evidences = []
    for e in m.evidences:
        entry = {"id": e.id, "name": e.name}
        if e.year is not None:
            entry["year"] = e.year
        entry["description"] = e.description
        evidences.append(entry)
    doc["evidences"] = evidences
    doc["levels"] = {name: _pair(p) for name, p in m.schedule.levels.items()}
    if m.schedule.aliases:
        doc["aliases"] = dict(m.schedule.aliases)
    cells: dict = {}
    for (sid, eid), level in m.cells.items():
        cells.setdefault(sid, {})[eid] = level
    doc["cells"] = cells
    if m.overrides:
        overrides: dict = {}
        for (sid, eid), pair in m.overrides.items():
            overrides.setdefault(sid, {})[eid] = _pair(pair)
        doc["overrides"] = overrides
    return doc


def serialize(m: AssessmentMatrix) -> str:
    """Render a matrix as a dataset document; ``load_dataset`` inverts it."""
    return _toml.dumps(to_document(m))


def canonical_dataset_text() -> str:
    return resources.files("singularity_metric.data").joinpath("canonical.toml").read_text("utf-8")


def read_dataset(path: Optional[Union[str, Path]] = None) -> AssessmentMatrix:
    """Load a dataset file.

    With no path, falls back to ``$SINGULARITY_METRIC_DATASET`` and then to
    the built-in canonical dataset.
    """
    if path is None:
        path = os.environ.get(DATASET_ENV_VAR) or None
    if path is None:
        return canonical_dataset()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DatasetError([f"cannot read {path}: {exc.strerror or exc}"]) from None
    return load_dataset(text)


def write_dataset(m: AssessmentMatrix, path: Union[str, Path]) -> None:
    Path(path).write_text(serialize(m), encoding="utf-8")
