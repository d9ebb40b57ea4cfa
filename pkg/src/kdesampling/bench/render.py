"""Summary tables (markdown / CSV) and per-architecture grouped bar charts (SVG).

Everything here reads an :class:`EvalReport`; nothing touches live training state.
"""

from __future__ import annotations

import csv
import io
import re
from pathlib import Path
from xml.sax.saxutils import escape

from .report import DISPLAY_DECIMALS, EvalReport, ReportError, best_methods

FAILED_CELL = "—"
BAR_COLOURS = ("#7f7f7f", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b")


def _fmt(v: float | None) -> str:
    return FAILED_CELL if v is None else f"{v:.{DISPLAY_DECIMALS}f}"


def _best_note(best: tuple[str, ...]) -> str:
    if len(best) > 1:
        return "tie: " + ", ".join(best)
    return best[0] if best else FAILED_CELL


def render_summary_table(report: EvalReport, format: str = "markdown") -> str:
    if not report.datasets or not report.samplers:
        raise ReportError("report is empty")
    if format == "markdown":
        return _markdown(report)
    if format == "csv":
        return _csv(report)
    raise ReportError(f"unknown table format {format!r}")


def _markdown(report: EvalReport) -> str:
    header = ["dataset", *report.samplers, "best"]
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "---|" + "---:|" * len(report.samplers) + "---|",
    ]
    for ds in report.datasets:
        row = report.summary_table[ds]
        best = best_methods(row)
        cells = [f"**{_fmt(row[s])}**" if s in best else _fmt(row[s]) for s in report.samplers]
        lines.append("| " + " | ".join([ds, *cells, _best_note(best)]) + " |")
    return "\n".join(lines) + "\n"


def _csv(report: EvalReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["dataset", *report.samplers, "best"])
    for ds in report.datasets:
        row = report.summary_table[ds]
        best = best_methods(row)
        writer.writerow([ds, *(_fmt(row[s]) for s in report.samplers), ";".join(best)])
    return buf.getvalue()


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", name).strip("_").lower()


def architecture_chart_csv(report: EvalReport, architecture: str) -> str:
    """Exact plotted values, full precision (``repr``) so they re-parse bit for bit."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["dataset", "sampler", "macro_f1"])
    table = report.per_architecture_table[architecture]
    for ds in report.datasets:
        for sp in report.samplers:
            v = table[ds][sp]
            writer.writerow([ds, sp, "" if v is None else repr(v)])
    return buf.getvalue()


def architecture_chart_svg(report: EvalReport, architecture: str) -> str:
    table = report.per_architecture_table[architecture]
    datasets, samplers = report.datasets, report.samplers
    left, right, top, bottom = 60, 20, 70, 80
    group_w = max(24 * len(samplers) + 20, 60)
    plot_w, plot_h = group_w * len(datasets), 260
    width, height = left + plot_w + right, top + plot_h + bottom
    bar_w = (group_w - 20) / len(samplers)

    def y_of(v: float) -> float:
        return top + plot_h * (1.0 - v)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="15">'
        f"Macro-average F1, {escape(architecture)}</text>",
    ]
    for i in range(6):
        v = i / 5
        y = y_of(v)
        out.append(f'<line x1="{left}" y1="{y:.1f}" x2="{left + plot_w}" y2="{y:.1f}" stroke="#e0e0e0"/>')
        out.append(f'<text x="{left - 6}" y="{y + 4:.1f}" text-anchor="end" font-size="11">{v:.1f}</text>')
    for k, sp in enumerate(samplers):
        x = left + k * 110
        colour = BAR_COLOURS[k % len(BAR_COLOURS)]
        out.append(f'<rect x="{x}" y="34" width="12" height="12" fill="{colour}"/>')
        out.append(f'<text x="{x + 16}" y="44" font-size="11">{escape(sp)}</text>')
    for g, ds in enumerate(datasets):
        gx = left + g * group_w + 10
        for k, sp in enumerate(samplers):
            v = table[ds][sp]
            x = gx + k * bar_w
            if v is None:
                out.append(f'<text x="{x + bar_w / 2:.1f}" y="{y_of(0) - 4:.1f}" text-anchor="middle" font-size="10">{FAILED_CELL}</text>')
                continue
            out.append(
                f'<rect class="bar" x="{x:.2f}" y="{y_of(v):.2f}" width="{bar_w - 2:.2f}" '
                f'height="{plot_h * v:.2f}" fill="{BAR_COLOURS[k % len(BAR_COLOURS)]}">'
                f"<title>{escape(ds)} / {escape(sp)}: {v:.4f}</title></rect>"
            )
        cx = left + g * group_w + group_w / 2
        out.append(
            f'<text x="{cx:.1f}" y="{top + plot_h + 16}" text-anchor="end" font-size="11" '
            f'transform="rotate(-30 {cx:.1f} {top + plot_h + 16})">{escape(ds)}</text>'
        )
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="#333"/>')
    out.append(f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" stroke="#333"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_architecture_charts(report: EvalReport, out_dir: str | Path) -> list[Path]:
    """One ``chart_<arch>.svg`` plus ``chart_<arch>.csv`` per architecture."""
    if not report.datasets or not report.samplers:
        raise ReportError("report is empty")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for arch in report.architectures:
        stem = out_dir / f"chart_{_slug(arch)}"
        svg, data = stem.with_suffix(".svg"), stem.with_suffix(".csv")
        svg.write_text(architecture_chart_svg(report, arch), encoding="utf-8")
        data.write_text(architecture_chart_csv(report, arch), encoding="utf-8")
        written += [svg, data]
    return written
