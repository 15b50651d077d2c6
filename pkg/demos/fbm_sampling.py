#!/usr/bin/env python3
"""The fractional Brownian sampler, checked against its own law.

Left: one path per Hurst value from identical random numbers -- the
Hurst parameter alone decides whether the path is jagged (H < 1/2) or
smooth and trending (H > 1/2).  Right: the empirical variance of B^H(t)
across 20 000 paths against the exact curve t^{2H}.

Also prints the lag-1 increment correlation: negative for H < 1/2,
zero at H = 1/2, positive for H > 1/2, matching the autocovariance
formula.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from wissde import SeedSpec, TimeGrid, fgn_autocovariance, sample_fbm_path, sample_fbm_paths

HURSTS = [0.1, 0.3, 0.5, 0.7, 0.9]
GRID = TimeGrid(1.0, 256)
M = 20_000


def main():
    t = GRID.times()
    fig, axes = plt.subplots(1, 2, figsize=(11, 4.2))

    for h in HURSTS:
        path = sample_fbm_path(h, GRID, SeedSpec(2024, 0))
        axes[0].plot(t, path.values, lw=0.9, label=f"H = {h}")
    axes[0].set_title("one path per H, shared randomness")
    axes[0].set_xlabel("t")
    axes[0].set_ylabel("$B^H(t)$")
    axes[0].legend(fontsize=8)

    print(f"{'H':>4} {'emp var(B(1))':>14} {'t^2H':>8} {'lag-1 corr':>11} {'theory':>8}")
    for h in HURSTS:
        paths = sample_fbm_paths(h, GRID, 2024, M)
        axes[1].plot(t, paths.var(axis=0), lw=0.9, label=f"H = {h} empirical")
        axes[1].plot(t, t ** (2 * h), "k:", lw=0.7)
        inc = np.diff(paths, axis=1)
        corr = float(np.mean(inc[:, :-1] * inc[:, 1:]) / np.mean(inc**2))
        theory = fgn_autocovariance(h, 1, GRID.dt) / fgn_autocovariance(h, 0, GRID.dt)
        print(f"{h:>4} {paths[:, -1].var():>14.4f} {1.0:>8.4f} {corr:>11.4f} {theory:>8.4f}")

    axes[1].set_title(f"Var $B^H(t)$ over {M} paths vs $t^{{2H}}$ (dotted)")
    axes[1].set_xlabel("t")
    axes[1].legend(fontsize=7)
    fig.tight_layout()
    fig.savefig("fbm_sampling.png", dpi=130)
    print("wrote fbm_sampling.png")


if __name__ == "__main__":
    main()
