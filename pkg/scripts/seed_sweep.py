"""Repeat an experiment over several base seeds to gauge how stable the
KDE vs imbalanced margin is.

    python3 scripts/seed_sweep.py --seeds 1 2 3 4 5 6 --jobs 4
"""

import argparse
import statistics
from dataclasses import replace
from pathlib import Path

from kdesampling.bench import load_config, run_experiment

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=str(ROOT / "configs" / "directional.json"))
    ap.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3, 4, 5, 6])
    ap.add_argument("--jobs", type=int, default=None)
    ap.add_argument("--margin", type=float, default=0.02)
    args = ap.parse_args()

    base = load_config(args.config)
    margins = []
    for seed in args.seeds:
        report = run_experiment(replace(base, base_seed=seed), parallelism=args.jobs, base_dir=Path(args.config).parent)
        name = report.datasets[0]
        medians = {s: report.median_summary(name, s) for s in report.samplers}
        margin = medians["KDE"] - medians["imbalanced"]
        margins.append(margin)
        cells = "  ".join(f"{s} {m:.4f}" for s, m in medians.items())
        print(f"seed {seed:>6}  {cells}  margin {margin:+.4f}", flush=True)

    hits = sum(m >= args.margin for m in margins)
    print(f"\nmargin >= {args.margin}: {hits}/{len(margins)} seeds; mean margin {statistics.fmean(margins):+.4f}")


if __name__ == "__main__":
    main()
