"""Command line entry point: ``run``, ``resample`` and ``report``."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

import numpy as np

from ..dataset import load_csv, write_csv
from ..samplers import SamplerSpec, resample
from .config import load_config
from .render import render_architecture_charts, render_summary_table
from .report import load_report, save_report
from .runner import run_experiment

REPORT_NAME = "report.json"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kdesampling", description="KDE minority oversampling benchmark")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a full experiment grid")
    run.add_argument("--config", required=True, type=Path)
    run.add_argument("--seed", type=int, help="override base_seed")
    run.add_argument("--out", type=Path, help="override output_dir")
    run.add_argument("--jobs", type=int, help="parallel worker processes")

    rs = sub.add_parser("resample", help="balance one CSV file")
    rs.add_argument("--input", required=True, type=Path)
    rs.add_argument("--method", required=True, choices=("kde", "ros", "rus"))
    rs.add_argument("--label-column", required=True)
    rs.add_argument("--positive", required=True, help="label text of the minority class")
    rs.add_argument("--seed", type=int, default=0)
    rs.add_argument("--output", required=True, type=Path)

    rp = sub.add_parser("report", help="re-render a saved report")
    rp.add_argument("--from", dest="source", required=True, type=Path)
    rp.add_argument("--format", required=True, choices=("markdown", "csv", "svg"))
    rp.add_argument("--out", type=Path, help="chart directory for --format svg")
    return parser


def _cmd_run(args) -> int:
    config = load_config(args.config)
    changes = {}
    if args.seed is not None:
        changes["base_seed"] = args.seed
    if args.out is not None:
        changes["output_dir"] = str(args.out)
    config = dataclasses.replace(config, **changes)
    report = run_experiment(config, parallelism=args.jobs, base_dir=args.config.parent)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_report(report, out / REPORT_NAME)
    (out / "summary.md").write_text(render_summary_table(report, "markdown"), encoding="utf-8")
    (out / "summary.csv").write_text(render_summary_table(report, "csv"), encoding="utf-8")
    render_architecture_charts(report, out)
    sys.stdout.write(render_summary_table(report, "markdown"))
    failed = [r for r in report.runs if r.failed]
    if failed:
        print(f"{len(failed)} run(s) diverged; see 'error' fields in {out / REPORT_NAME}", file=sys.stderr)
    print(f"wrote {out / REPORT_NAME}", file=sys.stderr)
    return 0


def _cmd_resample(args) -> int:
    label = args.label_column
    data = load_csv(args.input, int(label) if label.isdigit() else label, args.positive)
    outcome = resample(data, SamplerSpec(args.method), np.random.default_rng(args.seed))
    label_name = label if not label.isdigit() else "label"
    write_csv(outcome.data, args.output, label_column=label_name)
    n_maj, n_min = outcome.data.class_counts()
    print(
        f"{args.method}: {n_maj} majority / {n_min} minority "
        f"({outcome.n_synthetic} added, {outcome.n_removed} removed) -> {args.output}",
        file=sys.stderr,
    )
    return 0


def _cmd_report(args) -> int:
    report = load_report(args.source)
    if args.format == "svg":
        out = args.out or args.source.parent
        for path in render_architecture_charts(report, out):
            print(path)
    else:
        sys.stdout.write(render_summary_table(report, args.format))
    return 0


def cli_main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    handler = {"run": _cmd_run, "resample": _cmd_resample, "report": _cmd_report}[args.command]
    try:
        return handler(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())
