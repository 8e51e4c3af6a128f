"""Command-line entry point: ``singularity-metric``.

Exit codes: 0 success, 1 validation or parse failure, 2 bad invocation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from singularity_metric import _toml
from singularity_metric.dataset import DATASET_ENV_VAR, DatasetError, read_dataset
from singularity_metric.engine import InvalidMatrixError, run
from singularity_metric.evidence import canonical_schedule, parse_schedule
from singularity_metric.fit import (
    DEFAULT_SNAP_THRESHOLD,
    PUBLISHED_CORRECTIONS,
    fit_table,
    parse_table,
)
from singularity_metric.report import FORMATS, emit_report, render_fit, render_sensitivity
from singularity_metric.sensitivity import PerturbationSpec, perturb_metric, tornado


class _Failure(Exception):
    pass


def _correction(text: str) -> tuple[tuple[str, str], str]:
    try:
        cell, value = text.split("=", 1)
        sid, eid = cell.split(":", 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected SORT:EVIDENCE=VALUE, got {text!r}") from None
    return (sid.strip(), eid.strip()), value.strip()


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _non_negative(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError("must be a non-negative number")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="singularity-metric",
        description="Sequential Bayesian scoring of AI milestones against capability sorts.",
        epilog=f"Without --dataset, ${DATASET_ENV_VAR} is used if set, else the built-in canonical dataset.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="compute the posterior table and metric")
    p.add_argument("--dataset", type=Path)
    p.add_argument("--format", choices=FORMATS, default="md")
    p.add_argument("--out", type=Path, help="write here instead of standard output")

    p = sub.add_parser("fit", help="recover likelihood ratios from a displayed table and audit it")
    p.add_argument("--table", type=Path, required=True)
    p.add_argument("--schedule", type=Path, help="TOML file with [levels] (and optional [aliases])")
    p.add_argument("--correct", type=_correction, action="append", default=[], metavar="S:EV=VALUE",
                   help="replace one cell's text before fitting (repeatable)")
    p.add_argument("--published-corrections", action="store_true",
                   help="apply the known misprint fix S4:Ev5=0.99945")
    p.add_argument("--threshold", type=_non_negative, default=DEFAULT_SNAP_THRESHOLD)
    p.add_argument("--format", choices=("md", "json"), default="md")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("sense", help="Monte Carlo sensitivity to the level schedule")
    p.add_argument("--delta", type=_non_negative, required=True)
    p.add_argument("--samples", type=_positive_int, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--dataset", type=Path)
    p.add_argument("--format", choices=("md", "json"), default="md")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("tornado", help="one-rung-up/down sensitivity per cell")
    p.add_argument("--dataset", type=Path)
    p.add_argument("--format", choices=("md", "json"), default="md")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("validate", help="check a dataset file")
    p.add_argument("--dataset", type=Path, required=True)
    return parser


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _load_schedule(path: Optional[Path]):
    if path is None:
        return canonical_schedule()
    try:
        schedule = parse_schedule(_toml.loads(path.read_text(encoding="utf-8")))
    except (OSError, ValueError) as exc:
        raise _Failure(f"cannot load schedule {path}: {exc}") from None
    return schedule


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            table = run(read_dataset(args.dataset))
            _emit(emit_report(table, args.format), args.out)
        elif args.command == "fit":
            try:
                displayed = parse_table(args.table.read_text(encoding="utf-8"))
            except (OSError, ValueError) as exc:
                raise _Failure(f"cannot read table {args.table}: {exc}") from None
            corrections = dict(PUBLISHED_CORRECTIONS) if args.published_corrections else {}
            corrections.update(dict(args.correct))
            result = fit_table(displayed, _load_schedule(args.schedule), corrections, args.threshold)
            _emit(render_fit(result, args.format), args.out)
        elif args.command == "sense":
            spec = PerturbationSpec(args.delta, args.samples, args.seed)
            report = perturb_metric(read_dataset(args.dataset), spec)
            _emit(render_sensitivity(report, args.format), args.out)
        elif args.command == "tornado":
            _emit(render_sensitivity(tornado(read_dataset(args.dataset)), args.format), args.out)
        elif args.command == "validate":
            m = read_dataset(args.dataset)
            print(f"{args.dataset}: ok ({len(m.sorts)} sorts x {len(m.evidences)} evidences)")
    except DatasetError as exc:
        for err in exc.errors:
            print(f"error: {err}", file=sys.stderr)
        return 1
    except InvalidMatrixError as exc:
        for err in exc.violations:
            print(f"error: {err}", file=sys.stderr)
        return 1
    except _Failure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
