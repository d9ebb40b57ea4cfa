"""Run the 20:1 synthetic experiment and print per-sampler medians.

    python3 scripts/run_directional.py [--config configs/directional.json] [--jobs 4]
"""

import argparse
import logging
from dataclasses import replace
from pathlib import Path

from kdesampling.bench import load_config, render_architecture_charts, run_experiment, save_report
from kdesampling.bench.render import render_summary_table

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=str(ROOT / "configs" / "directional.json"))
    ap.add_argument("--seed", type=int, help="override base_seed")
    ap.add_argument("--jobs", type=int, default=None)
    ap.add_argument("--out", help="output directory (default: the config's output_dir)")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    config = load_config(args.config)
    if args.seed is not None:
        config = replace(config, base_seed=args.seed)
    report = run_experiment(config, parallelism=args.jobs, base_dir=Path(args.config).parent)
    out = Path(args.out or config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_report(report, out / "report.json")
    render_architecture_charts(report, out)

    print(render_summary_table(report))
    for name in report.datasets:
        medians = {s: report.median_summary(name, s) for s in report.samplers}
        print(f"\n{name} medians over trials (base_seed {config.base_seed}):")
        for s, m in medians.items():
            print(f"  {s:<12} {m:.4f}")
        if "KDE" in medians and "imbalanced" in medians:
            print(f"  KDE - imbalanced = {medians['KDE'] - medians['imbalanced']:+.4f}")
    print(f"\nreport written to {out / 'report.json'}")


if __name__ == "__main__":
    main()
