"""Exact sampling of fractional Brownian motion on uniform grids.

Paths are generated by circulant embedding of the fractional Gaussian
noise autocovariance (exact in law, O(n log n) per path), with a dense
Cholesky sampler as independent oracle and as the documented recovery
path after an embedding failure.  Randomness is counter-based: each
(master_seed, stream_index) pair owns one Philox stream, so parallel
Monte Carlo is schedule-independent and bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import EmbeddingError

__all__ = [
    "TimeGrid",
    "FbmPath",
    "SeedSpec",
    "check_hurst",
    "fbm_covariance",
    "fbm_covariance_matrix",
    "fgn_autocovariance",
    "gaussian_stream",
    "sample_fbm_path",
    "sample_fbm_paths",
    "sample_fbm_path_cholesky",
    "sample_fbm_paths_cholesky",
    "subsample_path",
    "truncate_path",
    "translated_fbm",
]

CHOLESKY_MAX_STEPS = 4096

# Eigenvalues in [-EIG_REL_TOL * max(eig), 0) are treated as rounding noise.
EIG_REL_TOL = 1e-10


def check_hurst(h: float) -> float:
    """Validate a Hurst parameter, returning it as a float.

    The admissible range is the open interval (0, 1); the degenerate
    H = 1 case (straight-line paths) is excluded.
    """
    h = float(h)
    if not 0.0 < h < 1.0:
        raise ValueError(f"Hurst parameter must lie in (0, 1), got {h}")
    return h


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid 0 = t_0 < t_1 < ... < t_n = t_final with n steps."""

    t_final: float
    n_steps: int

    def __post_init__(self):
        if not self.t_final > 0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise ValueError(f"n_steps must be a positive integer, got {self.n_steps}")
        object.__setattr__(self, "t_final", float(self.t_final))
        object.__setattr__(self, "n_steps", int(self.n_steps))

    @property
    def dt(self) -> float:
        return self.t_final / self.n_steps

    def times(self) -> np.ndarray:
        # linspace pins times()[-1] == t_final exactly; accumulating i*dt can
        # overshoot t_final by an ulp and break (t_final - t_i) >= 0 downstream.
        return np.linspace(0.0, self.t_final, self.n_steps + 1)


@dataclass(frozen=True, eq=False)
class FbmPath:
    """A fractional Brownian path sampled at the nodes of a uniform grid.

    ``values[i]`` is B^H(t_i); ``values[0]`` is always 0.
    """

    hurst: float
    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        check_hurst(self.hurst)
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n_steps + 1,):
            raise ValueError(
                f"values must have length n_steps+1 = {self.grid.n_steps + 1}, "
                f"got shape {values.shape}"
            )
        if values[0] != 0.0:
            raise ValueError(f"values[0] must be 0, got {values[0]}")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class SeedSpec:
    """Identifies one Gaussian stream: (master_seed, stream_index).

    Distinct stream indices under the same master seed give statistically
    independent streams; equal pairs reproduce draws bit-for-bit.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        if self.stream_index < 0:
            raise ValueError("stream_index must be nonnegative")


def gaussian_stream(seed: SeedSpec) -> np.random.Generator:
    """Counter-based generator for the given stream.

    Philox is keyed with the master seed in the low 64 bits and the stream
    index in the high 64 bits, so every (master_seed, stream_index) pair maps
    to its own keyed counter sequence regardless of scheduling.
    """
    key = seed.master_seed + (seed.stream_index << 64)
    return np.random.Generator(np.random.Philox(key=key))


def fbm_covariance(h: float, t, s):
    """Covariance of fBm: half of t^{2H} + s^{2H} - |t-s|^{2H}.

    Accepts scalars or arrays (broadcast); times must be nonnegative.
    """
    check_hurst(h)
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(t < 0) or np.any(s < 0):
        raise ValueError("fbm_covariance requires t, s >= 0")
    two_h = 2.0 * h
    out = 0.5 * (t**two_h + s**two_h - np.abs(t - s) ** two_h)
    return out if out.ndim else float(out)


def fbm_covariance_matrix(h: float, times: np.ndarray) -> np.ndarray:
    """Dense covariance matrix C[i, j] = Cov(B^H(times[i]), B^H(times[j]))."""
    times = np.asarray(times, dtype=float)
    return fbm_covariance(h, times[:, None], times[None, :])


def fgn_autocovariance(h: float, lag, dt: float):
    """Autocovariance of the increment sequence at the given lag(s).

    For increments of size dt the lag-k autocovariance is
    dt^{2H} * 0.5 * (|k+1|^{2H} - 2 k^{2H} + |k-1|^{2H}); lag 0 gives the
    increment variance dt^{2H}.
    """
    check_hurst(h)
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    k = np.asarray(lag, dtype=float)
    if np.any(k < 0):
        raise ValueError("lag must be nonnegative")
    two_h = 2.0 * h
    out = (
        0.5
        * dt**two_h
        * (np.abs(k + 1) ** two_h - 2.0 * k**two_h + np.abs(k - 1) ** two_h)
    )
    return out if out.ndim else float(out)


@lru_cache(maxsize=64)
def _circulant_sqrt_eigenvalues(h: float, n: int, dt: float) -> np.ndarray:
    """Square roots of the eigenvalues of the size-2n circulant embedding.

    The first row embeds the fGN autocovariance at lags 0..n (the lag-n
    value sits in the Nyquist slot).  Eigenvalues in [-eps, 0) with
    eps = EIG_REL_TOL * max(eig) are clamped to 0 as rounding noise;
    anything lower raises EmbeddingError.
    """
    gamma = fgn_autocovariance(h, np.arange(n + 1), dt)
    first_row = np.concatenate([gamma, gamma[-2:0:-1]])
    eig = np.fft.fft(first_row).real
    tol = EIG_REL_TOL * eig.max()
    worst = eig.min()
    if worst < -tol:
        raise EmbeddingError(eigenvalue=float(worst), tolerance=float(tol))
    root = np.sqrt(np.clip(eig, 0.0, None))
    root.setflags(write=False)
    return root


def _fgn_from_stream(h, grid, master_seed, streams):
    """Fractional Gaussian noise rows, one Philox stream per row."""
    n = grid.n_steps
    m2 = 2 * n
    root = _circulant_sqrt_eigenvalues(float(h), n, grid.dt)
    u = np.empty((len(streams), m2))
    for row, idx in enumerate(streams):
        u[row] = gaussian_stream(SeedSpec(master_seed, idx)).standard_normal(m2)
    z = np.zeros((len(streams), m2), dtype=complex)
    z[:, 0] = u[:, 0]
    z[:, n] = u[:, 1]
    if n > 1:
        z[:, 1:n] = (u[:, 2:m2:2] + 1j * u[:, 3:m2:2]) / np.sqrt(2.0)
        z[:, n + 1 :] = np.conj(z[:, n - 1 : 0 : -1])
    spectral = np.fft.ifft(root[None, :] * z, axis=1)
    return np.sqrt(m2) * spectral.real[:, :n]


def sample_fbm_paths(
    h: float, grid: TimeGrid, master_seed: int, n_paths: int, stream_start: int = 0
) -> np.ndarray:
    """Sample a batch of fBm paths; row m comes from stream stream_start + m.

    Returns an (n_paths, n_steps+1) array of path values with column 0 zero.
    Batch results are bit-identical to the corresponding single-path calls.
    """
    check_hurst(h)
    streams = range(stream_start, stream_start + n_paths)
    fgn = _fgn_from_stream(h, grid, master_seed, streams)
    out = np.empty((n_paths, grid.n_steps + 1))
    out[:, 0] = 0.0
    np.cumsum(fgn, axis=1, out=out[:, 1:])
    return out


def sample_fbm_path(h: float, grid: TimeGrid, seed: SeedSpec) -> FbmPath:
    """Sample one fBm path on the grid by circulant embedding.

    Raises EmbeddingError when the embedding has a negative eigenvalue
    beyond tolerance; callers may then retry with sample_fbm_path_cholesky.
    """
    values = sample_fbm_paths(h, grid, seed.master_seed, 1, seed.stream_index)[0]
    return FbmPath(hurst=float(h), grid=grid, values=values)


@lru_cache(maxsize=16)
def _cholesky_factor(h: float, n: int, t_final: float) -> np.ndarray:
    times = TimeGrid(t_final, n).times()[1:]
    factor = np.linalg.cholesky(fbm_covariance_matrix(h, times))
    factor.setflags(write=False)
    return factor


def sample_fbm_paths_cholesky(
    h: float, grid: TimeGrid, master_seed: int, n_paths: int, stream_start: int = 0
) -> np.ndarray:
    """Batch counterpart of sample_fbm_path_cholesky (rows = streams)."""
    check_hurst(h)
    n = grid.n_steps
    if n > CHOLESKY_MAX_STEPS:
        raise ValueError(
            f"Cholesky sampler supports n <= {CHOLESKY_MAX_STEPS}, got {n}"
        )
    factor = _cholesky_factor(float(h), n, grid.t_final)
    z = np.empty((n_paths, n))
    for row, idx in enumerate(range(stream_start, stream_start + n_paths)):
        z[row] = gaussian_stream(SeedSpec(master_seed, idx)).standard_normal(n)
    out = np.empty((n_paths, n + 1))
    out[:, 0] = 0.0
    np.matmul(z, factor.T, out=out[:, 1:])
    return out


def sample_fbm_path_cholesky(h: float, grid: TimeGrid, seed: SeedSpec) -> FbmPath:
    """Exact fBm sampling via dense Cholesky factorization (n <= 4096).

    O(n^2) per path after an O(n^3) factorization; kept as an independent
    oracle for tests and as the fallback after EmbeddingError.
    """
    values = sample_fbm_paths_cholesky(h, grid, seed.master_seed, 1, seed.stream_index)[0]
    return FbmPath(hurst=float(h), grid=grid, values=values)


def subsample_path(fine: FbmPath, factor: int) -> FbmPath:
    """Restrict a path to every factor-th node (same t_final, n/factor steps)."""
    factor = int(factor)
    if factor < 1:
        raise ValueError(f"factor must be a positive integer, got {factor}")
    n = fine.grid.n_steps
    if n % factor != 0:
        raise ValueError(f"factor {factor} does not divide n_steps {n}")
    coarse = TimeGrid(fine.grid.t_final, n // factor)
    return FbmPath(hurst=fine.hurst, grid=coarse, values=fine.values[::factor].copy())


def truncate_path(path: FbmPath, k: int) -> FbmPath:
    """First k steps of a path as a path on [0, t_k]."""
    k = int(k)
    if not 1 <= k <= path.grid.n_steps:
        raise ValueError(f"k must be in 1..{path.grid.n_steps}, got {k}")
    t_k = float(path.grid.times()[k])
    return FbmPath(hurst=path.hurst, grid=TimeGrid(t_k, k), values=path.values[: k + 1].copy())


def translated_fbm(h: float, beta: float, anchor_t: float, s: float, b_at_s):
    """Value of the fBm after the noise translation used by the solvers.

    Shifts an observed value B^H(s) by -beta times the fBm covariance of
    (anchor_t, s); this is the closed form of the translation that removes
    the Wick product from the quasilinear equation.
    """
    return b_at_s - beta * fbm_covariance(h, anchor_t, s)
