"""Tests for fBm covariance formulas and the exact samplers."""

import numpy as np
import pytest

import wissde.fbm as fbm_mod
from wissde import (
    EmbeddingError,
    FbmPath,
    SeedSpec,
    TimeGrid,
    fbm_covariance,
    fbm_covariance_matrix,
    fgn_autocovariance,
    gaussian_stream,
    sample_fbm_path,
    sample_fbm_path_cholesky,
    sample_fbm_paths,
    sample_fbm_paths_cholesky,
    subsample_path,
    translated_fbm,
    truncate_path,
)


class TestCovariance:
    def test_brownian_case_reduces_to_min(self):
        assert fbm_covariance(0.5, 1.0, 2.0) == pytest.approx(1.0, abs=1e-14)

    def test_variance_is_t_to_2h(self):
        assert fbm_covariance(0.75, 2.0, 2.0) == pytest.approx(2.0**1.5, rel=1e-14)

    def test_antipersistent_value(self):
        # 0.5 * (1 + 3^0.5 - 2^0.5), checked against a Cholesky-sampled
        # covariance estimate while developing the oracle
        assert fbm_covariance(0.25, 1.0, 3.0) == pytest.approx(
            0.658918622597891, rel=1e-13
        )

    @pytest.mark.parametrize("h", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_diagonal_and_symmetry(self, h):
        rng = np.random.default_rng(42)
        t = rng.uniform(0.0, 5.0, size=200)
        s = rng.uniform(0.0, 5.0, size=200)
        assert np.allclose(fbm_covariance(h, t, t), t ** (2 * h), atol=1e-12)
        assert np.array_equal(fbm_covariance(h, t, s), fbm_covariance(h, s, t))

    def test_zero_times(self):
        assert fbm_covariance(0.3, 0.0, 0.0) == 0.0

    def test_rejects_negative_times(self):
        with pytest.raises(ValueError):
            fbm_covariance(0.5, -1.0, 2.0)
        with pytest.raises(ValueError):
            fbm_covariance(0.5, 1.0, -2.0)

    @pytest.mark.parametrize("h", [0.0, 1.0, -0.2, 1.5])
    def test_rejects_bad_hurst(self, h):
        with pytest.raises(ValueError):
            fbm_covariance(h, 1.0, 1.0)


class TestFgnAutocovariance:
    def test_brownian_lags_vanish(self):
        assert fgn_autocovariance(0.5, 3, 1.0) == pytest.approx(0.0, abs=1e-14)

    def test_lag_zero_is_increment_variance(self):
        assert fgn_autocovariance(0.5, 0, 0.25) == pytest.approx(0.25, rel=1e-14)
        assert fgn_autocovariance(0.3, 0, 0.5) == pytest.approx(0.5**0.6, rel=1e-14)

    def test_persistent_lag_one(self):
        # expand E[(B(2)-B(1))(B(1)-B(0))] with the covariance function
        assert fgn_autocovariance(0.75, 1, 1.0) == pytest.approx(
            0.41421356237309515, rel=1e-13
        )

    @pytest.mark.parametrize("h", [0.2, 0.5, 0.8])
    @pytest.mark.parametrize("k", [0, 1, 2, 7])
    def test_matches_increment_covariance(self, h, k):
        # brute-force oracle: four-term expansion via fbm_covariance
        dt = 0.125
        t, s = (k + 1) * dt, dt
        expected = (
            fbm_covariance(h, t, s)
            - fbm_covariance(h, t, s - dt)
            - fbm_covariance(h, t - dt, s)
            + fbm_covariance(h, t - dt, s - dt)
        )
        assert fgn_autocovariance(h, k, dt) == pytest.approx(expected, abs=1e-14)

    def test_rejects_bad_dt(self):
        with pytest.raises(ValueError):
            fgn_autocovariance(0.5, 1, 0.0)


@pytest.mark.parametrize("h", [0.1, 0.25, 0.5, 0.75, 0.9])
def test_power_difference_bound(h):
    # |t^{2H} - s^{2H}| <= |t-s|^{2H} for H <= 1/2, else 2H T^{2H-1} |t-s|
    rng = np.random.default_rng(7)
    T = 2.0
    s = rng.uniform(0.0, T, size=10_000)
    t = rng.uniform(s, T)
    lhs = np.abs(t ** (2 * h) - s ** (2 * h))
    if h <= 0.5:
        bound = np.abs(t - s) ** (2 * h)
    else:
        bound = 2 * h * T ** (2 * h - 1) * np.abs(t - s)
    assert np.all(lhs <= bound + 1e-12)


class TestTimeGrid:
    def test_times_endpoints_exact(self):
        grid = TimeGrid(0.7, 13)
        t = grid.times()
        assert t[0] == 0.0 and t[-1] == 0.7
        assert len(t) == 14
        assert np.all(np.diff(t) > 0)

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            TimeGrid(0.0, 4)
        with pytest.raises(ValueError):
            TimeGrid(1.0, 0)


class TestSampler:
    def test_deterministic_and_batch_consistent(self):
        grid = TimeGrid(1.0, 32)
        seed = SeedSpec(987654321, 5)
        a = sample_fbm_path(0.3, grid, seed)
        b = sample_fbm_path(0.3, grid, seed)
        assert np.array_equal(a.values, b.values)
        batch = sample_fbm_paths(0.3, grid, 987654321, 8, stream_start=0)
        assert np.array_equal(batch[5], a.values)

    def test_streams_differ(self):
        grid = TimeGrid(1.0, 16)
        a = sample_fbm_path(0.5, grid, SeedSpec(1, 0))
        b = sample_fbm_path(0.5, grid, SeedSpec(1, 1))
        assert not np.array_equal(a.values, b.values)

    def test_starts_at_zero_with_full_length(self):
        grid = TimeGrid(2.0, 10)
        path = sample_fbm_path(0.7, grid, SeedSpec(3))
        assert path.values[0] == 0.0
        assert path.values.shape == (11,)

    def test_single_step_marginal_variance(self):
        # values[1] ~ N(0, T^{2H}); sample variance within 3 standard errors
        h, T, m = 0.25, 1.5, 100_000
        grid = TimeGrid(T, 1)
        endpoints = sample_fbm_paths(h, grid, 2024, m)[:, 1]
        target = T ** (2 * h)
        se = target * np.sqrt(2.0 / m)
        assert abs(endpoints.var() - target) < 3 * se

    def test_brownian_increments_white(self):
        # lag-k autocorrelation within 3/sqrt(M) for k = 1..5
        m = 100_000
        path = sample_fbm_path(0.5, TimeGrid(1.0, m), SeedSpec(11, 0))
        inc = np.diff(path.values)
        inc = inc - inc.mean()
        denom = float(inc @ inc)
        for k in range(1, 6):
            rho = float(inc[:-k] @ inc[k:]) / denom
            assert abs(rho) < 3.0 / np.sqrt(m), f"lag {k} autocorrelation {rho}"

    @pytest.mark.parametrize("h", [0.25, 0.75])
    def test_covariance_matches_oracle_small(self, h):
        # circulant and dense-Cholesky samplers both match the analytic
        # covariance entrywise within 3 standard errors
        n, T, m = 16, 1.0, 40_000
        grid = TimeGrid(T, n)
        target = fbm_covariance_matrix(h, grid.times())
        diag = np.diag(target)
        se = np.sqrt((np.outer(diag, diag) + target**2) / m)
        for sampler in (sample_fbm_paths, sample_fbm_paths_cholesky):
            paths = sampler(h, grid, 555, m)
            emp = paths.T @ paths / m
            assert np.all(np.abs(emp - target) <= 3 * se), sampler.__name__

    def test_cholesky_step_limit(self):
        with pytest.raises(ValueError):
            sample_fbm_path_cholesky(0.5, TimeGrid(1.0, 8192), SeedSpec(0))

    def test_embedding_failure_raises(self, monkeypatch):
        # fGN embeddings are nonnegative-definite, so force a bad sequence
        def bad_autocov(h, lag, dt):
            # eigenvalues 1 + 1.8 cos(theta), negative near theta = pi
            k = np.asarray(lag, dtype=float)
            return np.where(k == 0, 1.0, np.where(k == 1, 0.9, 0.0))

        monkeypatch.setattr(fbm_mod, "fgn_autocovariance", bad_autocov)
        with pytest.raises(EmbeddingError) as excinfo:
            sample_fbm_path(0.123456789, TimeGrid(1.0, 8), SeedSpec(0))
        assert excinfo.value.eigenvalue < 0

    def test_gaussian_stream_reproducible(self):
        g1 = gaussian_stream(SeedSpec(77, 3)).standard_normal(10)
        g2 = gaussian_stream(SeedSpec(77, 3)).standard_normal(10)
        assert np.array_equal(g1, g2)


class TestPathUtilities:
    def _path(self, values, t_final=1.0, h=0.5):
        values = np.asarray(values, dtype=float)
        return FbmPath(h, TimeGrid(t_final, len(values) - 1), values)

    def test_subsample_identity(self):
        path = sample_fbm_path(0.4, TimeGrid(1.0, 8), SeedSpec(1))
        same = subsample_path(path, 1)
        assert np.array_equal(same.values, path.values)
        assert same.grid == path.grid

    def test_subsample_to_endpoint(self):
        path = self._path([0, 1, 2, 3, 4, 5, 6, 7, 8])
        coarse = subsample_path(path, 8)
        assert coarse.grid.n_steps == 1
        assert np.array_equal(coarse.values, [0.0, 8.0])

    def test_subsample_every_other(self):
        path = self._path([0.0, 0.3, -0.1, 0.2, 0.5])
        coarse = subsample_path(path, 2)
        assert np.array_equal(coarse.values, [0.0, -0.1, 0.5])
        assert coarse.grid.t_final == path.grid.t_final

    def test_subsample_rejects_nondivisor(self):
        path = self._path([0.0, 1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            subsample_path(path, 2)

    def test_truncate(self):
        path = self._path([0.0, 0.1, 0.2, 0.3], t_final=3.0)
        head = truncate_path(path, 2)
        assert head.grid.n_steps == 2
        assert head.grid.t_final == path.grid.times()[2]
        assert np.array_equal(head.values, [0.0, 0.1, 0.2])
        with pytest.raises(ValueError):
            truncate_path(path, 0)

    def test_path_validation(self):
        with pytest.raises(ValueError):
            FbmPath(0.5, TimeGrid(1.0, 2), np.array([0.5, 1.0, 2.0]))
        with pytest.raises(ValueError):
            FbmPath(0.5, TimeGrid(1.0, 2), np.array([0.0, 1.0]))


class TestTranslatedFbm:
    def test_zero_beta_is_identity(self):
        assert translated_fbm(0.3, 0.0, 1.0, 0.4, 0.123) == 0.123

    def test_brownian_anchor(self):
        assert translated_fbm(0.5, 1.0, 1.0, 1.0, 0.7) == pytest.approx(-0.3, abs=1e-14)

    def test_antipersistent_value(self):
        got = translated_fbm(0.25, 2.0, 1.0, 0.5, 0.0)
        assert got == pytest.approx(-1.0, abs=1e-12)
        # cross-check through the covariance oracle
        assert got == pytest.approx(-2.0 * fbm_covariance(0.25, 1.0, 0.5), rel=1e-15)
