"""Recover likelihood ratios from printed posteriors and audit printed tables.

This inverts the update arithmetic: consecutive posteriors ``p_{k-1}, p_k``
imply the likelihood ratio ``odds(p_k) / odds(p_{k-1})``.  Snapping those
ratios onto a level schedule reconstructs which support level each cell
used.  The auditor flags cells of a displayed table that look like
transcription problems.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Mapping, Optional, Sequence

from singularity_metric.bayes import check_probability, odds_of
from singularity_metric.engine import UNIVERSAL_PRIOR, Trajectory
from singularity_metric.evidence import LevelSchedule

DEFAULT_SNAP_THRESHOLD = 0.10

# Known misprint in the published table: S4/Ev5 reads 0,999945 but the
# surrounding cells only fit 0.99945 (likelihood ratio 3 on both sides).
PUBLISHED_CORRECTIONS = {("S4", "Ev5"): "0.99945"}

ANOMALY_KINDS = ("monotonicity-violation", "decimal-comma", "precision-mismatch", "malformed")


@dataclass(frozen=True)
class RecoveredStep:
    evidence_id: str
    lr: float
    snapped_level: Optional[str] = None
    relative_residual: Optional[float] = None


@dataclass(frozen=True)
class TableAnomaly:
    sort_id: str
    evidence_id: str
    kind: str
    detail: str
    value: Optional[float] = None


@dataclass(frozen=True)
class DisplayedTable:
    """A posterior table as text: ``cells[k][i]`` is evidence k, sort i."""

    sort_ids: tuple[str, ...]
    evidence_ids: tuple[str, ...]
    cells: tuple[tuple[str, ...], ...]

    def column(self, sort_id: str) -> list[str]:
        i = self.sort_ids.index(sort_id)
        return [row[i] for row in self.cells]

    def with_corrections(self, corrections: Mapping[tuple[str, str], str]) -> "DisplayedTable":
        rows = [list(r) for r in self.cells]
        for (sid, eid), text in corrections.items():
            if sid in self.sort_ids and eid in self.evidence_ids:
                rows[self.evidence_ids.index(eid)][self.sort_ids.index(sid)] = text
        return replace(self, cells=tuple(tuple(r) for r in rows))


def recover_ratios(traj: Sequence[float], evidence_ids: Optional[Sequence[str]] = None) -> list[RecoveredStep]:
    """Likelihood ratio of each step of a posterior sequence.

    ``traj[0]`` is the starting belief; step ``k`` (1-based) yields the ratio
    that moved ``traj[k-1]`` to ``traj[k]``.

    Args:
        traj: posteriors, all strictly inside (0, 1).
        evidence_ids: labels for the ``len(traj) - 1`` steps; defaults to
            ``Ev1, Ev2, ...``.

    Raises:
        ValueError: for fewer than two values, or any value at 0 or 1
            (infinite or zero odds make the ratio unidentifiable).
    """
    if len(traj) < 2:
        raise ValueError("need at least two posteriors to recover a ratio")
    probs = [check_probability(p) for p in traj]
    for p in probs:
        if p in (0.0, 1.0):
            raise ValueError(f"posterior {p!r} sits on an endpoint; likelihood ratio is unidentifiable")
    if evidence_ids is None:
        evidence_ids = [f"Ev{k}" for k in range(1, len(probs))]
    if len(evidence_ids) != len(probs) - 1:
        raise ValueError("need exactly one evidence id per step")
    odds = [odds_of(p) for p in probs]
    return [RecoveredStep(eid, odds[k] / odds[k - 1]) for k, eid in enumerate(evidence_ids, start=1)]


def recover_trajectory(t: Trajectory, evidence_ids: Optional[Sequence[str]] = None) -> list[RecoveredStep]:
    """Recover the ratios of an engine trajectory, including the first step from its prior."""
    return recover_ratios((t.prior, *t.posteriors), evidence_ids)


def snap_levels(
    steps: Sequence[RecoveredStep],
    schedule: LevelSchedule,
    threshold: float = DEFAULT_SNAP_THRESHOLD,
) -> list[RecoveredStep]:
    """Attach to each step the schedule level nearest in log-ratio.

    Steps whose relative residual exceeds ``threshold`` keep the residual
    to the nearest level but get ``snapped_level=None``.
    """
    rungs = [(name, pair.ratio()) for name, pair in schedule.levels.items()]
    if not rungs:
        raise ValueError("schedule has no levels")
    out = []
    for step in steps:
        name, ratio = min(rungs, key=lambda rung: abs(math.log(step.lr / rung[1])))
        residual = abs(step.lr - ratio) / ratio
        out.append(replace(step, snapped_level=name if residual <= threshold else None, relative_residual=residual))
    return out


_NUMBER = re.compile(r"^[+-]?(\d+)(?:[.,](\d*))?$")


def normalize_cell(text: str) -> tuple[float, bool]:
    """Parse one displayed decimal; returns ``(value, used_decimal_comma)``.

    Raises:
        ValueError: if the text is not a plain decimal number.
    """
    s = text.strip()
    if not _NUMBER.match(s):
        raise ValueError(f"not a decimal number: {text!r}")
    return float(s.replace(",", ".")), "," in s


def _decimals(text: str) -> Optional[int]:
    m = _NUMBER.match(text.strip())
    if not m:
        return None
    return len(m.group(2) or "")


def audit_table(
    grid: Sequence[Sequence[str]],
    sort_ids: Optional[Sequence[str]] = None,
    evidence_ids: Optional[Sequence[str]] = None,
) -> list[TableAnomaly]:
    """Flag suspicious cells in a displayed posterior grid.

    ``grid[k][i]`` is the text shown for evidence ``k`` and sort ``i``.
    Reports decimal commas, malformed numbers, cells whose number of
    decimals differs from their column's usual format, and decreases
    between consecutive evidences (impossible when every ratio is >= 1).
    Bad cells are reported, never raised.

    Raises:
        ValueError: if the grid is ragged or the id lists do not match it.
    """
    n_rows = len(grid)
    n_cols = len(grid[0]) if grid else 0
    if any(len(row) != n_cols for row in grid):
        raise ValueError("grid rows have differing lengths")
    sort_ids = list(sort_ids) if sort_ids is not None else [f"S{i}" for i in range(1, n_cols + 1)]
    evidence_ids = list(evidence_ids) if evidence_ids is not None else [f"Ev{k}" for k in range(1, n_rows + 1)]
    if len(sort_ids) != n_cols or len(evidence_ids) != n_rows:
        raise ValueError(f"grid is {n_rows}x{n_cols} but ids describe {len(evidence_ids)}x{len(sort_ids)}")

    anomalies = []
    for i, sid in enumerate(sort_ids):
        column = [grid[k][i] for k in range(n_rows)]
        digits = [d for d in (_decimals(c) for c in column) if d is not None]
        usual = Counter(digits).most_common(1)[0][0] if digits else None
        previous = None
        for k, (eid, text) in enumerate(zip(evidence_ids, column)):
            try:
                value, comma = normalize_cell(text)
            except ValueError:
                anomalies.append(TableAnomaly(sid, eid, "malformed", f"cannot parse {text!r}"))
                continue
            if comma:
                anomalies.append(TableAnomaly(sid, eid, "decimal-comma", f"{text!r} read as {value!r}", value))
            if usual is not None and _decimals(text) != usual:
                anomalies.append(
                    TableAnomaly(
                        sid, eid, "precision-mismatch",
                        f"{text!r} has {_decimals(text)} decimals, column uses {usual}", value,
                    )
                )
            if previous is not None and value < previous[1]:
                anomalies.append(
                    TableAnomaly(
                        sid, eid, "monotonicity-violation",
                        f"{previous[0]}->{eid} decreases {previous[1]!r} -> {value!r}", value,
                    )
                )
            previous = (eid, value)
    return anomalies


def _split(line: str) -> list[str]:
    if "|" in line:
        return [t.strip() for t in line.strip().strip("|").split("|")]
    if ";" in line or "\t" in line:
        return [t.strip() for t in re.split(r"[;\t]", line) if t.strip()]
    if ", " in line or ("," in line and not re.search(r"\s", line.strip())):
        return [t.strip() for t in line.split(",")]
    return line.split()


def _is_number(token: str) -> bool:
    return bool(_NUMBER.match(token.strip()))


def parse_table(text: str) -> DisplayedTable:
    """Read a displayed posterior grid from plain text.

    Rows are evidences and columns are sorts.  Cells may be separated by
    whitespace, tabs, semicolons, pipes (markdown tables) or commas; when
    commas separate cells they cannot double as decimal marks.  An optional
    header row names the sorts and an optional first column names the
    evidences.  Lines starting with ``#`` are ignored, and in pipe tables so
    is every line outside the table.

    Raises:
        ValueError: on an empty or ragged table.
    """
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if any(ln.lstrip().startswith("|") for ln in lines):
        lines = [ln for ln in lines if ln.lstrip().startswith("|") and not re.fullmatch(r"[\s|:\-]+", ln)]
    rows = [_split(ln) for ln in lines]
    if not rows:
        raise ValueError("table is empty")

    header = None
    if any(not _is_number(t) for t in rows[0][1:]) or all(not _is_number(t) for t in rows[0]):
        header, rows = rows[0], rows[1:]
    if not rows:
        raise ValueError("table has a header but no data rows")
    labelled = all(rows) and all(not _is_number(r[0]) for r in rows)
    if labelled:
        evidence_ids = tuple(r[0] for r in rows)
        rows = [r[1:] for r in rows]
    else:
        evidence_ids = tuple(f"Ev{k}" for k in range(1, len(rows) + 1))
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("table rows have differing numbers of cells")
    if header is not None:
        names = header[1:] if len(header) == width + 1 else header
        if len(names) != width:
            raise ValueError("header does not match the number of columns")
        sort_ids = tuple(names)
    else:
        sort_ids = tuple(f"S{i}" for i in range(1, width + 1))
    return DisplayedTable(sort_ids, evidence_ids, tuple(tuple(r) for r in rows))


def published_table() -> DisplayedTable:
    """The published posterior table exactly as printed."""
    text = resources.files("singularity_metric.data").joinpath("published_table.txt").read_text("utf-8")
    return parse_table(text)


@dataclass
class FitResult:
    table: DisplayedTable
    anomalies: list[TableAnomaly]
    steps: dict[str, list[RecoveredStep]] = field(default_factory=dict)
    errors: dict[str, str] = field(default_factory=dict)

    def levels(self) -> dict[tuple[str, str], Optional[str]]:
        return {(sid, s.evidence_id): s.snapped_level for sid, steps in self.steps.items() for s in steps}


def fit_table(
    table: DisplayedTable,
    schedule: LevelSchedule,
    corrections: Optional[Mapping[tuple[str, str], str]] = None,
    threshold: float = DEFAULT_SNAP_THRESHOLD,
    prior: float = UNIVERSAL_PRIOR,
) -> FitResult:
    """Audit a displayed table, then recover and snap every column's ratios.

    ``corrections`` replace cell texts before anything else happens.  Each
    column is prefixed with ``prior`` so the first evidence gets a ratio
    too.  Columns that cannot be inverted are listed in ``errors``.
    """
    if corrections:
        table = table.with_corrections(corrections)
    result = FitResult(table, audit_table(table.cells, table.sort_ids, table.evidence_ids))
    for sid in table.sort_ids:
        try:
            values = [normalize_cell(c)[0] for c in table.column(sid)]
            steps = recover_ratios([prior, *values], table.evidence_ids)
        except ValueError as exc:
            result.errors[sid] = str(exc)
            continue
        result.steps[sid] = snap_levels(steps, schedule, threshold)
    return result
