#!/usr/bin/env python3
"""Strong convergence of the four schemes at fixed H.

Estimates the endpoint RMSE against a coupled fine-grid GBMEM reference
for a ladder of step sizes, then fits rates on the log-log curve.  This
is a scaled-down run (150 samples, reference grid 2^12); the CLI presets
fig3a/fig3b reproduce the full desk-scale experiment.

Expected outcome: at H = 0.25 every scheme converges with rate about
0.75 (that is H + 1/2, well above the proven rate H), and the four error
curves lie almost on top of each other.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from wissde import (
    ConvergenceConfig,
    SdeProblem,
    SolverKind,
    convergence_study,
    get_drift,
)

HURST = 0.25


def main():
    config = ConvergenceConfig(
        problem=SdeProblem(1.0, 1.0, 1.0, 1.0, HURST, get_drift("quasi_rational")),
        methods=tuple(SolverKind),
        dt_list=tuple(2.0**-k for k in range(5, 10)),
        ref_steps=2**12,
        samples=150,
        batches=10,
        master_seed=777,
    )
    print(f"running {len(config.methods)} methods x {len(config.dt_list)} step sizes, "
          f"{config.samples} samples each ...")
    table, fits = convergence_study(config)

    print(f"\n{'method':>12} {'dt':>10} {'rmse':>12}")
    for method in config.methods:
        for dt in config.dt_list:
            print(f"{method.value:>12} {dt:>10.5f} {table.rmse(method, dt):>12.3e}")

    print(f"\n{'method':>12} {'slope':>8} {'+/-':>8} {'C':>10}")
    for method in config.methods:
        fit = fits[method]
        print(
            f"{method.value:>12} {fit.slope:>8.3f} {fit.slope_stderr:>8.3f} "
            f"{fit.error_constant:>10.3e}"
        )

    fig, ax = plt.subplots(figsize=(6, 4.5))
    dts = np.array(config.dt_list)
    for method in config.methods:
        rmses = [table.rmse(method, dt) for dt in config.dt_list]
        ax.loglog(dts, rmses, "o-", label=f"{method.value}", lw=1)
    guide = np.exp(fits[SolverKind.GBMEM].intercept) * dts ** fits[SolverKind.GBMEM].slope
    ax.loglog(dts, guide, "k--", lw=1,
              label=f"fit slope {fits[SolverKind.GBMEM].slope:.3f}")
    ax.set_xlabel("dt")
    ax.set_ylabel("endpoint RMSE")
    ax.set_title(f"strong error at H = {HURST}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig("convergence_rates.png", dpi=130)
    print("\nwrote convergence_rates.png")


if __name__ == "__main__":
    main()
