"""Tests for RMSE estimation, rate fitting, and the H sweep."""

import numpy as np
import pytest

from wissde import (
    ConfigError,
    ConvergenceConfig,
    SdeProblem,
    SolverKind,
    conjectured_rate,
    convergence_study,
    estimate_error_constant,
    estimate_rmse,
    fit_rate,
    get_drift,
    rate_vs_h_sweep,
    theoretical_rate,
)


def make_config(
    hurst=0.5,
    alpha=0.0,
    beta=1.0,
    drift="quasi_rational",
    methods=(SolverKind.GBMEM,),
    dt_list=(2**-4, 2**-5, 2**-6),
    ref_steps=2**9,
    samples=64,
    batches=8,
    master_seed=42,
):
    problem = SdeProblem(alpha, beta, 1.0, 1.0, hurst, get_drift(drift))
    return ConvergenceConfig(
        problem=problem,
        methods=methods,
        dt_list=dt_list,
        ref_steps=ref_steps,
        samples=samples,
        batches=batches,
        master_seed=master_seed,
    )


class TestConfigValidation:
    def test_accepts_valid(self):
        cfg = make_config()
        assert cfg.steps_for(2**-4) == 16

    def test_rejects_nondyadic_dt(self):
        with pytest.raises(ConfigError):
            make_config(dt_list=(0.3, 0.1))

    def test_rejects_dt_not_dividing_ref(self):
        with pytest.raises(ConfigError):
            make_config(dt_list=(1 / 3, 1 / 6))

    def test_rejects_unsorted_dt(self):
        with pytest.raises(ConfigError):
            make_config(dt_list=(2**-5, 2**-4))

    def test_rejects_non_power_of_two_ref(self):
        with pytest.raises(ConfigError):
            make_config(ref_steps=1000)

    def test_rejects_bad_batches(self):
        with pytest.raises(ConfigError):
            make_config(samples=10, batches=3)

    def test_rejects_empty_methods(self):
        with pytest.raises(ConfigError):
            make_config(methods=())


class TestFitRate:
    def test_exact_power_law(self):
        dts = np.array([0.1, 0.01, 0.001])
        fit = fit_rate(dts, 2.0 * dts)
        assert fit.slope == pytest.approx(1.0, abs=1e-10)
        assert fit.error_constant == pytest.approx(2.0, rel=1e-10)

    def test_constant_rmse_gives_zero_slope(self):
        fit = fit_rate([0.1, 0.01, 0.001], [0.7, 0.7, 0.7])
        assert fit.slope == pytest.approx(0.0, abs=1e-12)

    def test_planted_exponent_recovery(self):
        dts = 2.0 ** -np.arange(3, 11)
        fit = fit_rate(dts, 0.5 * dts**0.6)
        assert fit.slope == pytest.approx(0.6, abs=1e-10)
        assert estimate_error_constant(fit) == pytest.approx(0.5, rel=1e-10)

    def test_noisy_recovery(self):
        rng = np.random.default_rng(0)
        dts = 2.0 ** -np.arange(3, 11)
        rmses = 3.0 * dts**0.75 * (1.0 + 0.01 * rng.standard_normal(8))
        fit = fit_rate(dts, rmses)
        assert abs(fit.slope - 0.75) < 0.05

    def test_zero_points_excluded(self):
        dts = np.array([0.1, 0.01, 0.001])
        fit = fit_rate(dts, np.array([0.2, 0.0, 0.002]))
        assert fit.slope == pytest.approx(1.0, abs=1e-10)

    def test_too_few_points_is_error(self):
        with pytest.raises(ConfigError):
            fit_rate([0.1, 0.01], [0.5, 0.0])

    def test_batch_stderr(self):
        dts = np.array([0.1, 0.01])
        batch = np.array([[1.0 * 0.1, 1.0 * 0.01], [2.0 * 0.1**1.2, 2.0 * 0.01**1.2]])
        fit = fit_rate(dts, batch.mean(axis=0), batch)
        expected = np.std([1.0, 1.2], ddof=1)
        assert fit.slope_stderr == pytest.approx(expected, rel=1e-10)


class TestEstimateRmse:
    def test_exact_scheme_zero_error(self):
        # GBMEM is exact on zero drift, and the reference is coupled
        cfg = make_config(alpha=1.0, beta=1.0, drift="zero", hurst=0.3)
        scale = abs(cfg.problem.x0) * np.exp(
            abs(cfg.problem.alpha) + cfg.problem.beta**2
        )
        for dt in cfg.dt_list:
            rmse, batch = estimate_rmse(cfg, SolverKind.GBMEM, dt)
            assert rmse <= 1e-10 * scale
            assert batch.shape == (cfg.batches,)

    def test_self_comparison_is_exact_zero(self):
        cfg = make_config(dt_list=(2**-7, 2**-9), ref_steps=2**9, drift="zero")
        rmse, _ = estimate_rmse(cfg, SolverKind.GBMEM, 2**-9)
        assert rmse == 0.0

    def test_rejects_foreign_dt(self):
        cfg = make_config()
        with pytest.raises(ConfigError):
            estimate_rmse(cfg, SolverKind.GBMEM, 0.25)

    def test_pooled_matches_batches(self):
        cfg = make_config(alpha=1.0, samples=48, batches=6)
        rmse, batch = estimate_rmse(cfg, SolverKind.GBMEM, 2**-5)
        assert rmse**2 == pytest.approx(np.mean(batch**2), rel=1e-12)

    def test_thread_count_does_not_change_results(self):
        cfg = make_config(alpha=1.0, samples=96, batches=8, ref_steps=2**10)
        serial, sb = estimate_rmse(cfg, SolverKind.GBMEM, 2**-5, threads=1)
        threaded, tb = estimate_rmse(cfg, SolverKind.GBMEM, 2**-5, threads=4)
        assert serial == threaded
        assert np.array_equal(sb, tb)

    def test_chunking_does_not_change_results(self, monkeypatch):
        import wissde.experiments as exp_mod

        cfg = make_config(alpha=1.0, samples=40, batches=5)
        whole, _ = estimate_rmse(cfg, SolverKind.GBMEM, 2**-5)
        monkeypatch.setattr(exp_mod, "_CHUNK_ELEMENTS", 7 * (cfg.ref_steps + 1))
        pieces, _ = estimate_rmse(cfg, SolverKind.GBMEM, 2**-5)
        assert whole == pieces


class TestConvergenceStudy:
    def test_alpha_zero_columns_identical(self):
        cfg = make_config(
            alpha=0.0, methods=(SolverKind.GBMEM, SolverKind.MISHURA_EM), samples=32
        )
        table, _ = convergence_study(cfg)
        for dt in cfg.dt_list:
            assert table.rmse(SolverKind.GBMEM, dt) == table.rmse(
                SolverKind.MISHURA_EM, dt
            )

    def test_zero_drift_exact_column_fits_nan(self):
        cfg = make_config(alpha=1.0, drift="zero", samples=16, batches=4)
        table, fits = convergence_study(cfg)
        assert all(table.rmse(SolverKind.GBMEM, dt) < 1e-12 for dt in cfg.dt_list)
        assert np.isnan(fits[SolverKind.GBMEM].slope)

    def test_mishura_first_order_on_deterministic_factor(self):
        # drift 0 and alpha != 0: only the Euler error on exp(alpha t) remains
        cfg = make_config(
            alpha=1.0,
            hurst=0.75,
            drift="zero",
            methods=(SolverKind.MISHURA_EM,),
            samples=64,
            batches=8,
            ref_steps=2**10,
            dt_list=(2**-4, 2**-5, 2**-6, 2**-7),
        )
        _, fits = convergence_study(cfg)
        assert 0.9 <= fits[SolverKind.MISHURA_EM].slope <= 1.1

    def test_monotone_rmse_with_one_inversion_allowed(self):
        cfg = make_config(alpha=1.0, hurst=0.25, samples=128, batches=8)
        table, _ = convergence_study(cfg)
        rmses = [table.rmse(SolverKind.GBMEM, dt) for dt in cfg.dt_list]
        inversions = sum(b > a for a, b in zip(rmses, rmses[1:]))
        assert inversions <= 1


class TestSweep:
    @pytest.mark.slow
    def test_error_constant_bounded_toward_small_h(self):
        # strong-noise problem (beta=5, x0=25, log drift): the fitted error
        # constant must not grow as H decreases
        base = ConvergenceConfig(
            problem=SdeProblem(0.0, 5.0, 25.0, 1.0, 0.5, get_drift("log_square")),
            methods=(SolverKind.MISHURA_EM,),
            dt_list=tuple(2.0**-k for k in range(6, 11)),
            ref_steps=2**14,
            samples=500,
            batches=10,
            master_seed=20250810,
        )
        h_values = np.arange(1, 10) / 10.0
        report = rate_vs_h_sweep(h_values, base)
        log_c = np.array([np.log(row.fit.error_constant) for row in report.rows])
        trend = np.polyfit(h_values, log_c, 1)[0]
        assert trend >= 0.0, f"log C_H trend {trend:.3f} decreases toward large H"
        assert log_c[0] <= log_c.max()

    def test_rows_and_annotations(self):
        cfg = make_config(alpha=0.0, samples=32, batches=4, methods=(SolverKind.GBMEM,))
        report = rate_vs_h_sweep([0.3, 0.7], cfg)
        assert len(report.rows) == 2
        first, second = report.rows
        assert first.hurst == 0.3
        assert first.theoretical_rate == pytest.approx(0.3)
        assert first.conjectured_rate == pytest.approx(0.8)
        assert second.conjectured_rate == pytest.approx(1.0)
        assert np.isfinite(first.fit.slope)

    def test_rate_helpers(self):
        assert theoretical_rate(0.4, None) == 0.4
        assert theoretical_rate(0.9, 0.5) == 0.5
        assert conjectured_rate(0.5) == 1.0
        assert conjectured_rate(0.2) == pytest.approx(0.7)
