"""Monte-Carlo strong-error estimation and convergence-rate fitting.

The root-mean-square endpoint error of a scheme is estimated against a
fine-grid reference computed with GBMEM on the *same* fBm path (coupled
reference), for a ladder of step sizes.  Rates come from ordinary least
squares on the log-log error curve, with error bars from refitting on
contiguous sample batches; sweeping the Hurst parameter produces
rate-versus-H tables with the proven and conjectured rates annotated.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError
from .fbm import TimeGrid, sample_fbm_paths
from .solvers import SolverKind, solve_endpoint_values
from .wis import SdeProblem

__all__ = [
    "ConvergenceConfig",
    "RmseEntry",
    "RmseTable",
    "RateFit",
    "SweepRow",
    "SweepReport",
    "estimate_rmse",
    "fit_rate",
    "convergence_study",
    "rate_vs_h_sweep",
    "estimate_error_constant",
    "theoretical_rate",
    "conjectured_rate",
]

# Per-chunk element budget for the fine-path matrix (~128 MiB of float64);
# keeps paper-scale reference grids (2^19 steps) within memory.
_CHUNK_ELEMENTS = 2**24


@dataclass(frozen=True)
class ConvergenceConfig:
    """One convergence study: problem, methods, step ladder, sampling plan."""

    problem: SdeProblem
    methods: Tuple[SolverKind, ...]
    dt_list: Tuple[float, ...]
    ref_steps: int
    samples: int
    batches: int
    master_seed: int

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "dt_list", tuple(float(d) for d in self.dt_list))
        if not self.methods:
            raise ConfigError("methods must be nonempty")
        if len(self.dt_list) < 1:
            raise ConfigError("dt_list must be nonempty")
        if any(b >= a for a, b in zip(self.dt_list, self.dt_list[1:])):
            raise ConfigError(f"dt_list must be strictly descending: {self.dt_list}")
        n_ref = int(self.ref_steps)
        if n_ref < 1 or n_ref & (n_ref - 1):
            raise ConfigError(f"ref_steps must be a power of two, got {self.ref_steps}")
        object.__setattr__(self, "ref_steps", n_ref)
        for dt in self.dt_list:
            self.steps_for(dt)
        if self.samples < 1:
            raise ConfigError(f"samples must be positive, got {self.samples}")
        if self.batches < 1 or self.samples % self.batches:
            raise ConfigError(
                f"batches ({self.batches}) must divide samples ({self.samples})"
            )
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must be an unsigned 64-bit integer")

    def steps_for(self, dt: float) -> int:
        """Coarse step count T/dt; must be integer and divide ref_steps."""
        ratio = self.problem.t_final / dt
        n = int(round(ratio))
        if n < 1 or abs(ratio - n) > 1e-9 * max(1, n):
            raise ConfigError(f"T/dt = {ratio} is not an integer for dt = {dt}")
        if self.ref_steps % n:
            raise ConfigError(
                f"coarse step count {n} (dt = {dt}) does not divide "
                f"ref_steps {self.ref_steps}"
            )
        return n


@dataclass(frozen=True, eq=False)
class RmseEntry:
    rmse: float
    batch_rmses: np.ndarray


@dataclass(frozen=True, eq=False)
class RmseTable:
    """RMSE indexed by (method, dt), plus per-batch values for error bars."""

    methods: Tuple[SolverKind, ...]
    dts: Tuple[float, ...]
    entries: Dict[Tuple[SolverKind, float], RmseEntry] = field(default_factory=dict)

    def rmse(self, method: SolverKind, dt: float) -> float:
        return self.entries[(method, dt)].rmse

    def batch_rmses(self, method: SolverKind, dt: float) -> np.ndarray:
        return self.entries[(method, dt)].batch_rmses


@dataclass(frozen=True)
class RateFit:
    """Least-squares fit of log(rmse) against log(dt)."""

    slope: float
    intercept: float
    slope_stderr: float
    error_constant: float


@dataclass(frozen=True)
class SweepRow:
    hurst: float
    method: SolverKind
    fit: RateFit
    theoretical_rate: float
    conjectured_rate: float


@dataclass(frozen=True, eq=False)
class SweepReport:
    rows: Tuple[SweepRow, ...]


def theoretical_rate(h: float, holder_exponent: Optional[float]) -> float:
    """Proven strong rate min(H, zeta); autonomous drifts have zeta = 1."""
    zeta = 1.0 if holder_exponent is None else holder_exponent
    return min(h, zeta)


def conjectured_rate(h: float) -> float:
    """Empirically observed strong rate min(H + 1/2, 1)."""
    return min(h + 0.5, 1.0)


def _squared_errors(
    config: ConvergenceConfig, method: SolverKind, dt: float, threads: int
) -> np.ndarray:
    """Per-sample squared endpoint errors against the coupled GBMEM reference."""
    problem = config.problem
    n_ref = config.ref_steps
    factor = n_ref // config.steps_for(dt)
    fine_grid = TimeGrid(problem.t_final, n_ref)
    coarse_grid = TimeGrid(problem.t_final, n_ref // factor)

    sq = np.empty(config.samples)
    chunk = max(1, min(config.samples, _CHUNK_ELEMENTS // (n_ref + 1)))
    if threads > 1:
        # smaller chunks so every worker gets some; per-sample results do
        # not depend on chunk boundaries, so this cannot change values
        chunk = max(1, min(chunk, -(-config.samples // threads)))
    bounds = list(range(0, config.samples, chunk))

    def run_chunk(lo: int) -> None:
        hi = min(lo + chunk, config.samples)
        fine = sample_fbm_paths(problem.hurst, fine_grid, config.master_seed, hi - lo, lo)
        x_ref, _, _ = solve_endpoint_values(problem, SolverKind.GBMEM, fine, fine_grid)
        coarse = fine[:, ::factor]
        x_coarse, _, _ = solve_endpoint_values(problem, method, coarse, coarse_grid)
        sq[lo:hi] = (x_ref - x_coarse) ** 2

    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run_chunk, bounds))
    else:
        for lo in bounds:
            run_chunk(lo)
    return sq


def estimate_rmse(
    config: ConvergenceConfig, method: SolverKind, dt: float, threads: int = 1
) -> Tuple[float, np.ndarray]:
    """Pooled RMSE at one (method, dt), plus per-batch RMSEs.

    Sample m draws the fine path from stream m of the config's master
    seed, so every (method, dt) pair sees the same paths and the fine
    GBMEM reference is coupled to the coarse solve.  Results do not
    depend on the thread count.
    """
    if dt not in config.dt_list:
        raise ConfigError(f"dt = {dt} is not in the configured dt_list")
    sq = _squared_errors(config, method, dt, threads)
    per_batch = sq.reshape(config.batches, config.samples // config.batches)
    return float(np.sqrt(sq.mean())), np.sqrt(per_batch.mean(axis=1))


def fit_rate(
    dts: Sequence[float],
    rmses: Sequence[float],
    batch_rmses: Optional[np.ndarray] = None,
) -> RateFit:
    """OLS fit of log(rmse) on log(dt); exact-zero points are excluded.

    slope_stderr is the sample standard deviation of slopes refitted per
    batch (nan when fewer than two batches survive); error_constant is
    exp(intercept).
    """
    dts = np.asarray(dts, dtype=float)
    rmses = np.asarray(rmses, dtype=float)
    if dts.shape != rmses.shape:
        raise ConfigError("dts and rmses must have matching shapes")
    keep = rmses > 0.0
    if keep.sum() < 2:
        raise ConfigError(
            f"need at least 2 nonzero rmse points to fit, have {int(keep.sum())}"
        )
    slope, intercept = np.polyfit(np.log(dts[keep]), np.log(rmses[keep]), 1)

    stderr = float("nan")
    if batch_rmses is not None:
        batch_rmses = np.asarray(batch_rmses, dtype=float)
        if batch_rmses.shape[-1] != dts.shape[0]:
            raise ConfigError("batch_rmses must have one column per dt")
        batch_slopes = []
        for row in np.atleast_2d(batch_rmses):
            row_keep = row > 0.0
            if row_keep.sum() >= 2:
                s, _ = np.polyfit(np.log(dts[row_keep]), np.log(row[row_keep]), 1)
                batch_slopes.append(s)
        if len(batch_slopes) >= 2:
            stderr = float(np.std(batch_slopes, ddof=1))
    return RateFit(
        slope=float(slope),
        intercept=float(intercept),
        slope_stderr=stderr,
        error_constant=float(np.exp(intercept)),
    )


def convergence_study(
    config: ConvergenceConfig, threads: int = 1
) -> Tuple[RmseTable, Dict[SolverKind, RateFit]]:
    """RMSE table over (method, dt) and a per-method rate fit.

    All methods share the coupled fine paths, so cross-method comparisons
    are low-variance.
    """
    table = RmseTable(methods=config.methods, dts=config.dt_list)
    for method in config.methods:
        for dt in config.dt_list:
            rmse, batch = estimate_rmse(config, method, dt, threads)
            table.entries[(method, dt)] = RmseEntry(rmse=rmse, batch_rmses=batch)
    nan = float("nan")
    fits: Dict[SolverKind, RateFit] = {}
    for method in config.methods:
        rmses = [table.rmse(method, dt) for dt in config.dt_list]
        batches = np.stack(
            [table.batch_rmses(method, dt) for dt in config.dt_list], axis=1
        )
        try:
            fits[method] = fit_rate(config.dt_list, rmses, batches)
        except ConfigError:
            # an exact scheme can drive every rmse to zero; report nan
            # instead of failing the remaining methods
            fits[method] = RateFit(nan, nan, nan, nan)
    return table, fits


def rate_vs_h_sweep(
    h_list: Sequence[float], config: ConvergenceConfig, threads: int = 1
) -> SweepReport:
    """Convergence study per Hurst value; one report row per (H, method)."""
    rows = []
    for h in h_list:
        cfg = replace(config, problem=config.problem.with_hurst(h))
        _, fits = convergence_study(cfg, threads)
        for method in cfg.methods:
            rows.append(
                SweepRow(
                    hurst=float(h),
                    method=method,
                    fit=fits[method],
                    theoretical_rate=theoretical_rate(
                        float(h), cfg.problem.drift.holder_exponent
                    ),
                    conjectured_rate=conjectured_rate(float(h)),
                )
            )
    return SweepReport(rows=tuple(rows))


def estimate_error_constant(fit: RateFit) -> float:
    """Error constant from the free two-parameter fit: exp(intercept)."""
    return fit.error_constant
