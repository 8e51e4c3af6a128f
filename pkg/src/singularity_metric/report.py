"""Render posterior tables, fit results and sensitivity reports as text.

Displayed numbers are rounded only here: posteriors to 5 decimals and the
metric to 9, using Python's correctly rounded formatting (exact ties go to
even).  The dot is always the decimal mark.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict
from typing import Optional, Sequence

from singularity_metric.engine import PosteriorTable, Trajectory
from singularity_metric.fit import FitResult, TableAnomaly
from singularity_metric.sensitivity import SensitivityReport

FORMATS = ("md", "csv", "json")
CELL_DECIMALS = 5
METRIC_DECIMALS = 9


def fmt_cell(x: float) -> str:
    return f"{x:.{CELL_DECIMALS}f}"


def fmt_metric(x: float) -> str:
    return f"{x:.{METRIC_DECIMALS}f}"


def _grid(t: PosteriorTable) -> list[list[str]]:
    header = ["Evidence", *t.sort_ids]
    rows = [header]
    for k, eid in enumerate(t.evidence_ids):
        rows.append([eid, *(fmt_cell(tr.posteriors[k]) for tr in t.trajectories)])
    return rows


def _md_table(rows: Sequence[Sequence[str]]) -> list[str]:
    lines = ["| " + " | ".join(rows[0]) + " |", "|" + "|".join("---" for _ in rows[0]) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows[1:]]
    return lines


def _anomaly_dict(a: TableAnomaly) -> dict:
    return asdict(a)


def _sensitivity_dict(r: SensitivityReport) -> dict:
    return {
        "samples": r.samples,
        "delta": r.delta,
        "seed": r.seed,
        "baseline": r.baseline,
        "metric_mean": r.metric_mean,
        "metric_sd": r.metric_sd,
        "quantiles": {f"{level:.2f}": q for level, q in r.quantiles.items()},
        "tornado": [asdict(e) for e in r.tornado],
    }


def emit_report(
    t: PosteriorTable,
    format: str = "md",
    anomalies: Optional[Sequence[TableAnomaly]] = None,
    sensitivity: Optional[SensitivityReport] = None,
) -> str:
    """Render a posterior table with evidences as rows and sorts as columns.

    ``csv`` carries only the grid (a header row plus one row per evidence).
    ``md`` adds the metric line and optional anomaly/sensitivity sections;
    ``json`` carries unrounded values alongside the display strings.

    Raises:
        ValueError: for an unknown format.
    """
    if format == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(_grid(t))
        return buf.getvalue()
    if format == "json":
        doc = {
            "sort_ids": list(t.sort_ids),
            "evidence_ids": list(t.evidence_ids),
            "priors": [tr.prior for tr in t.trajectories],
            "posteriors": {tr.sort_id: list(tr.posteriors) for tr in t.trajectories},
            "finals": list(t.finals),
            "metric": t.metric,
            "display": {
                "posteriors": {tr.sort_id: [fmt_cell(p) for p in tr.posteriors] for tr in t.trajectories},
                "finals": [fmt_cell(f) for f in t.finals],
                "metric": fmt_metric(t.metric),
            },
        }
        if anomalies is not None:
            doc["anomalies"] = [_anomaly_dict(a) for a in anomalies]
        if sensitivity is not None:
            doc["sensitivity"] = _sensitivity_dict(sensitivity)
        return json.dumps(doc, indent=2) + "\n"
    if format != "md":
        raise ValueError(f"unknown format {format!r}; choose from {', '.join(FORMATS)}")

    lines = ["# Posterior table", ""]
    lines += _md_table(_grid(t))
    lines += ["", f"Singularity metric (mean of final posteriors): {fmt_metric(t.metric)}"]
    if anomalies:
        lines += ["", "## Anomalies", ""]
        lines += [f"- {a.sort_id}/{a.evidence_id} {a.kind}: {a.detail}" for a in anomalies]
    if sensitivity is not None:
        lines += ["", render_sensitivity(sensitivity, "md").rstrip("\n")]
    return "\n".join(lines) + "\n"


def table_from_json(text: str) -> PosteriorTable:
    """Rebuild the PosteriorTable from ``emit_report(t, "json")`` output."""
    doc = json.loads(text)
    sort_ids = tuple(doc["sort_ids"])
    priors = doc.get("priors") or [0.5] * len(sort_ids)
    trajectories = tuple(
        Trajectory(sid, tuple(doc["posteriors"][sid]), prior) for sid, prior in zip(sort_ids, priors)
    )
    return PosteriorTable(
        sort_ids=sort_ids,
        evidence_ids=tuple(doc["evidence_ids"]),
        trajectories=trajectories,
        finals=tuple(doc["finals"]),
        metric=doc["metric"],
    )


def render_sensitivity(r: SensitivityReport, format: str = "md") -> str:
    if format == "json":
        return json.dumps(_sensitivity_dict(r), indent=2) + "\n"
    if format != "md":
        raise ValueError(f"unknown format {format!r}; choose from md, json")
    lines = []
    if r.tornado:
        lines += ["## Tornado (one rung up/down per cell)", ""]
        lines += [f"Baseline metric: {fmt_metric(r.baseline)}", ""]
        rows = [["Sort", "Evidence", "Move", "From", "To", "Metric delta"]]
        rows += [
            [e.sort_id, e.evidence_id, e.direction, e.from_level, e.to_level, f"{e.delta:+.9f}"]
            for e in r.tornado
        ]
        lines += _md_table(rows)
    else:
        lines += ["## Schedule perturbation (Monte Carlo)", ""]
        lines += [
            f"- samples: {r.samples}",
            f"- delta: {r.delta}",
            f"- seed: {r.seed}",
            f"- baseline metric: {fmt_metric(r.baseline)}",
            f"- metric mean: {fmt_metric(r.metric_mean)}",
            f"- metric sd: {fmt_metric(r.metric_sd)}",
        ]
        lines += [f"- q{round(level * 100):02d}: {fmt_metric(q)}" for level, q in r.quantiles.items()]
    return "\n".join(lines) + "\n"


def render_fit(result: FitResult, format: str = "md") -> str:
    """Recovered ratios, snapped levels and anomalies of a displayed table."""
    if format == "json":
        doc = {
            "sort_ids": list(result.table.sort_ids),
            "evidence_ids": list(result.table.evidence_ids),
            "steps": {sid: [asdict(s) for s in steps] for sid, steps in result.steps.items()},
            "errors": result.errors,
            "anomalies": [_anomaly_dict(a) for a in result.anomalies],
        }
        return json.dumps(doc, indent=2) + "\n"
    if format != "md":
        raise ValueError(f"unknown format {format!r}; choose from md, json")
    lines = ["# Recovered likelihood ratios", ""]
    rows = [["Sort", "Evidence", "LR", "Level", "Residual"]]
    for sid, steps in result.steps.items():
        for s in steps:
            rows.append([sid, s.evidence_id, f"{s.lr:.6g}", s.snapped_level or "-", f"{s.relative_residual:.4%}"])
    lines += _md_table(rows)
    if result.errors:
        lines += ["", "## Columns not inverted", ""]
        lines += [f"- {sid}: {msg}" for sid, msg in result.errors.items()]
    lines += ["", "## Anomalies", ""]
    if result.anomalies:
        lines += [f"- {a.sort_id}/{a.evidence_id} {a.kind}: {a.detail}" for a in result.anomalies]
    else:
        lines.append("none")
    return "\n".join(lines) + "\n"
