"""Compare Scott, LOO and oracle-MISE bandwidths on a known Gaussian mixture.

    python3 scripts/bandwidth_study.py --n 200 --reps 10
"""

import argparse

import numpy as np
from scipy import stats

from kdesampling import kde


def truth(x):
    # equal mixture of N(-1.5, 0.5^2) and N(1, 1) in 1-D
    x = np.asarray(x, dtype=float).reshape(-1)
    return 0.5 * stats.norm.pdf(x, -1.5, 0.5) + 0.5 * stats.norm.pdf(x, 1.0, 1.0)


def draw(n, rng):
    pick = rng.random(n) < 0.5
    return np.where(pick, rng.normal(-1.5, 0.5, n), rng.normal(1.0, 1.0, n))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    eval_points = np.linspace(-5, 5, 401)[:, None]
    grid = kde.BandwidthGrid(tuple(np.round(np.geomspace(0.25, 2.0, 13), 4)))
    rows = {"scott": [], "loo": [], "oracle": []}
    for _ in range(args.reps):
        pts = draw(args.n, rng)[:, None]
        for mode in rows:
            if mode == "scott":
                h = kde.scott_bandwidths(pts)
            elif mode == "loo":
                h = kde.select_bandwidth(pts, grid, "loo")
            else:
                h = kde.select_bandwidth(pts, grid, "oracle-mise", true_density=truth)
            model = kde.fit(pts, bandwidth_override=h)
            rows[mode].append((float(np.ravel(h)[0]), kde.sample_mise(model, truth, eval_points)))

    print(f"n={args.n}, reps={args.reps}")
    print(f"{'mode':<8} {'mean h':>8} {'mean MISE':>12}")
    for mode, vals in rows.items():
        h, mise = np.mean(vals, axis=0)
        print(f"{mode:<8} {h:8.4f} {mise:12.3e}")


if __name__ == "__main__":
    main()
