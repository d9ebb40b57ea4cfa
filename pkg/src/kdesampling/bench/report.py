"""Run records, aggregation over trials and architectures, and the JSON report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from statistics import fmean, median

from ..metrics import ScorePair

SCHEMA_VERSION = 1
DISPLAY_DECIMALS = 4


class ReportError(ValueError):
    pass


@dataclass(frozen=True)
class RunResult:
    dataset: str
    sampler: str  # display label, e.g. "KDE"
    architecture: str
    trial: int
    score: ScorePair | None  # None when training diverged
    wall_time: float
    seed_used: int
    test_digest: str  # sha256 of the test partition, identical across samplers
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.score is None


Table = dict[str, dict[str, float | None]]


@dataclass(frozen=True)
class EvalReport:
    datasets: tuple[str, ...]
    samplers: tuple[str, ...]
    architectures: tuple[str, ...]
    runs: tuple[RunResult, ...]
    per_architecture_table: dict[str, Table]  # arch -> dataset -> sampler -> mean macro-F1
    summary_table: Table  # dataset -> sampler -> mean over architectures
    best_method_per_dataset: dict[str, tuple[str, ...]]
    config: dict = field(default_factory=dict)
    dataset_meta: dict[str, dict] = field(default_factory=dict)

    def cell_runs(self, dataset: str, sampler: str, architecture: str) -> list[RunResult]:
        return [
            r for r in self.runs
            if (r.dataset, r.sampler, r.architecture) == (dataset, sampler, architecture)
        ]

    def trial_summaries(self, dataset: str, sampler: str) -> list[float]:
        """Per-trial macro-F1 averaged over architectures (trials with any failed run skipped)."""
        out = []
        trials = sorted({r.trial for r in self.runs})
        for t in trials:
            runs = [r for r in self.runs if (r.dataset, r.sampler, r.trial) == (dataset, sampler, t)]
            if runs and not any(r.failed for r in runs):
                out.append(fmean(r.score.macro for r in runs))
        return out

    def median_summary(self, dataset: str, sampler: str) -> float | None:
        values = self.trial_summaries(dataset, sampler)
        return median(values) if values else None


def best_methods(row: dict[str, float | None]) -> tuple[str, ...]:
    """Samplers whose cell ties for the maximum at display precision; failed cells never win."""
    shown = {k: round(v, DISPLAY_DECIMALS) for k, v in row.items() if v is not None}
    if not shown:
        return ()
    top = max(shown.values())
    return tuple(k for k in row if k in shown and shown[k] == top)


def aggregate(
    runs,
    datasets,
    samplers,
    architectures,
    config: dict | None = None,
    dataset_meta: dict | None = None,
) -> EvalReport:
    runs = tuple(runs)
    per_arch: dict[str, Table] = {}
    for arch in architectures:
        per_arch[arch] = {}
        for ds in datasets:
            per_arch[arch][ds] = {}
            for sp in samplers:
                scores = [
                    r.score.macro for r in runs
                    if (r.dataset, r.sampler, r.architecture) == (ds, sp, arch) and not r.failed
                ]
                per_arch[arch][ds][sp] = fmean(scores) if scores else None
    summary: Table = {}
    for ds in datasets:
        summary[ds] = {}
        for sp in samplers:
            cells = [per_arch[a][ds][sp] for a in architectures]
            summary[ds][sp] = None if any(c is None for c in cells) else fmean(cells)
    best = {ds: best_methods(summary[ds]) for ds in datasets}
    return EvalReport(
        tuple(datasets),
        tuple(samplers),
        tuple(architectures),
        runs,
        per_arch,
        summary,
        best,
        config or {},
        dataset_meta or {},
    )


def _run_to_dict(r: RunResult) -> dict:
    return {
        "dataset": r.dataset,
        "sampler": r.sampler,
        "architecture": r.architecture,
        "trial": r.trial,
        "score": None if r.score is None else {
            "f1_major": r.score.f1_major,
            "f1_minor": r.score.f1_minor,
            "macro": r.score.macro,
        },
        "wall_time": r.wall_time,
        "seed_used": r.seed_used,
        "test_digest": r.test_digest,
        "error": r.error,
    }


def _run_from_dict(d: dict) -> RunResult:
    s = d["score"]
    return RunResult(
        d["dataset"],
        d["sampler"],
        d["architecture"],
        d["trial"],
        None if s is None else ScorePair(s["f1_major"], s["f1_minor"], s["macro"]),
        d["wall_time"],
        d["seed_used"],
        d["test_digest"],
        d.get("error"),
    )


def report_to_dict(report: EvalReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "config": report.config,
        "datasets": list(report.datasets),
        "samplers": list(report.samplers),
        "architectures": list(report.architectures),
        "dataset_meta": report.dataset_meta,
        "per_architecture_table": report.per_architecture_table,
        "summary_table": report.summary_table,
        "best_method_per_dataset": {k: list(v) for k, v in report.best_method_per_dataset.items()},
        "runs": [_run_to_dict(r) for r in report.runs],
    }


def report_from_dict(doc: dict) -> EvalReport:
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ReportError(f"unsupported report schema_version {version!r} (expected {SCHEMA_VERSION})")
    try:
        return EvalReport(
            tuple(doc["datasets"]),
            tuple(doc["samplers"]),
            tuple(doc["architectures"]),
            tuple(_run_from_dict(r) for r in doc["runs"]),
            doc["per_architecture_table"],
            doc["summary_table"],
            {k: tuple(v) for k, v in doc["best_method_per_dataset"].items()},
            doc.get("config", {}),
            doc.get("dataset_meta", {}),
        )
    except (KeyError, TypeError) as exc:
        raise ReportError(f"malformed report: {exc!r}") from None


def dumps(report: EvalReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, ensure_ascii=False) + "\n"


def save_report(report: EvalReport, path: str | Path) -> None:
    Path(path).write_text(dumps(report), encoding="utf-8")


def load_report(path: str | Path) -> EvalReport:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ReportError(f"cannot read report {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ReportError(f"{path}: invalid JSON ({exc})") from None
    return report_from_dict(doc)
