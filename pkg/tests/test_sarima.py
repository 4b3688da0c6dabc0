"""SARIMA engine tests: closed-form oracles first, then recovery properties.

Likelihood oracles are independent closed forms (iid Gaussian product,
two-term AR(1) factorization); fitting oracles are seeded simulations from
the engine's own simulator per the dual-route design.
"""

import math

import numpy as np
import pytest
from scipy.stats import norm

from admitcast.diagnostics import ljung_box
from admitcast.errors import DataError
from admitcast.sarima import (
    ForecastResult,
    SarimaParams,
    SarimaSpec,
    coeffs_to_pacf,
    expand_polynomials,
    fit,
    forecast,
    information_criteria,
    loglik,
    pacf_to_coeffs,
    psi_weights,
    simulate,
)
from admitcast.series import TimeSeries


class TestTransforms:
    @pytest.mark.parametrize("k", [1, 2, 3, 5])
    def test_image_is_stationary(self, k):
        rng = np.random.default_rng(k)
        for _ in range(20):
            u = rng.standard_normal(k) * 2.5
            phi = pacf_to_coeffs(np.tanh(u))
            roots = np.roots(np.concatenate([[1.0], -phi])[::-1])
            assert np.all(np.abs(roots) > 1.0)

    @pytest.mark.parametrize("k", [1, 2, 4])
    def test_round_trip(self, k):
        rng = np.random.default_rng(10 + k)
        u = rng.standard_normal(k)
        phi = pacf_to_coeffs(np.tanh(u))
        back = np.arctanh(coeffs_to_pacf(phi))
        assert np.allclose(back, u, atol=1e-9)


class TestLogLik:
    def test_iid_gaussian_closed_form(self):
        x = np.random.default_rng(5).standard_normal(50) * 3.0 + 10.0
        mu, s2 = x.mean(), np.mean((x - x.mean()) ** 2)
        spec = SarimaSpec(0, 0, 0, include_drift=True)
        value = loglik(spec, SarimaParams(mu_or_drift=mu, sigma2=s2), TimeSeries(x, period=1))
        closed = norm.logpdf(x, mu, math.sqrt(s2)).sum()
        assert abs(value - closed) < 1e-9

    def test_ar1_two_term_closed_form(self):
        spec = SarimaSpec(1, 0, 0)
        params = SarimaParams(phi=[0.5], sigma2=1.0)
        series = TimeSeries(np.array([0.0, 1.0]), period=1)
        value = loglik(spec, params, series)
        closed = norm.logpdf(0.0, 0.0, math.sqrt(1.0 / (1.0 - 0.25))) + norm.logpdf(1.0, 0.0, 1.0)
        assert abs(value - closed) < 1e-9

    def test_truth_beats_perturbed(self):
        spec = SarimaSpec(1, 0, 1)
        truth = SarimaParams(phi=[0.5], theta=[0.3], sigma2=1.0)
        worse = SarimaParams(phi=[0.8], theta=[0.3], sigma2=1.0)
        wins = 0
        for seed in range(100):
            sim = simulate(spec, truth, 400, seed=seed)
            wins += loglik(spec, truth, sim) >= loglik(spec, worse, sim)
        assert wins >= 95

    def test_invalid_params_rejected(self):
        spec = SarimaSpec(1, 0, 0)
        with pytest.raises(DataError):
            loglik(spec, SarimaParams(phi=[1.1], sigma2=1.0), TimeSeries(np.arange(30.0), period=1))
        with pytest.raises(DataError):
            loglik(spec, SarimaParams(phi=[0.5], sigma2=-1.0), TimeSeries(np.arange(30.0), period=1))


class TestInformationCriteria:
    def test_definitional_arithmetic(self):
        aic, bic = information_criteria(-100.0, 3, 100)
        assert aic == 206.0
        assert abs(bic - (206.0 + 3 * math.log(100) - 6.0)) < 1e-12

    def test_k_zero_forbidden(self):
        with pytest.raises(DataError):
            information_criteria(-10.0, 0, 50)

    def test_bic_exceeds_aic_iff_n_at_least_8(self):
        for n in range(1, 30):
            aic, bic = information_criteria(-50.0, 2, n)
            assert (bic > aic) == (n >= 8)


class TestFit:
    def test_white_noise_mean_is_sample_mean(self):
        x = np.random.default_rng(6).standard_normal(80) * 2 + 5
        result = fit(SarimaSpec(0, 0, 0, include_drift=True), TimeSeries(x, period=1))
        assert result.params.mu_or_drift == pytest.approx(x.mean(), abs=1e-12)
        assert result.converged

    def test_ar1_recovery(self):
        sim = simulate(SarimaSpec(1, 0, 0), SarimaParams(phi=[0.7], sigma2=1.0), 500, seed=11)
        result = fit(SarimaSpec(1, 0, 0), sim)
        phi_hat = result.params.phi[0]
        assert 0.6 < phi_hat < 0.8
        assert abs(phi_hat - 0.7) <= 3.0 * result.std_errors[0]

    def test_fit_beats_white_noise_start(self):
        spec = SarimaSpec(1, 0, 1)
        sim = simulate(spec, SarimaParams(phi=[0.6], theta=[0.3], sigma2=2.0), 400, seed=3)
        result = fit(spec, sim)
        # optimizer starts from zero coefficients; it must never end worse
        start = fit(SarimaSpec(0, 0, 0), sim)
        assert result.loglik >= start.loglik

    def test_residuals_length_and_whiteness(self):
        spec = SarimaSpec(1, 0, 1)
        hits = 0
        for seed in range(50):
            sim = simulate(spec, SarimaParams(phi=[0.6], theta=[-0.3], sigma2=1.0), 300, seed=seed)
            result = fit(spec, sim, compute_std_errors=False)
            assert result.residuals.size == result.n_effective == 300
            hits += not ljung_box(result.residuals, 10, fitdf=2).rejected_at_05
        assert hits >= 45  # 90% of correctly specified fits stay white

    def test_gradient_vanishes_at_optimum(self):
        from admitcast.sarima import _full_nll_extended, _params_to_u
        from admitcast.series import difference

        spec = SarimaSpec(1, 0, 1, include_drift=True)
        sim = simulate(spec, SarimaParams(mu_or_drift=3.0, phi=[0.5], theta=[0.4], sigma2=1.5),
                       500, seed=9)
        result = fit(spec, sim)
        u_hat = _params_to_u(result.params, spec)
        u_ext = np.concatenate([u_hat, [math.log(result.params.sigma2)]])
        w = difference(sim.values, spec.diff_spec)

        grad = np.zeros(u_ext.size)
        for i in range(u_ext.size):
            step = np.zeros(u_ext.size)
            step[i] = 1e-5 * (1.0 + abs(u_ext[i]))
            grad[i] = (_full_nll_extended(u_ext + step, w, spec)
                       - _full_nll_extended(u_ext - step, w, spec)) / (2 * step[i])
        assert np.max(np.abs(grad)) < 1e-3 * (1.0 + abs(result.loglik))

    def test_insufficient_data(self):
        with pytest.raises(DataError):
            fit(SarimaSpec(2, 0, 2), TimeSeries(np.arange(12.0), period=1))

    def test_deterministic(self):
        sim = simulate(SarimaSpec(1, 0, 1), SarimaParams(phi=[0.5], theta=[0.2], sigma2=1.0),
                       300, seed=4)
        a = fit(SarimaSpec(1, 0, 1), sim, seed=7)
        b = fit(SarimaSpec(1, 0, 1), sim, seed=7)
        assert a.loglik == b.loglik
        assert np.array_equal(a.params.phi, b.params.phi)


class TestForecast:
    def test_iid_model_closed_form(self):
        x = np.random.default_rng(7).standard_normal(60) + 4.0
        result = fit(SarimaSpec(0, 0, 0, include_drift=True), TimeSeries(x, period=1))
        fc = forecast(result, 5, [0.95])
        sigma = math.sqrt(result.params.sigma2)
        assert np.allclose(fc.point, x.mean())
        assert np.allclose(fc.sigma_h, sigma)
        z = norm.ppf(0.975)
        assert np.allclose(fc.upper[:, 0], x.mean() + z * sigma)
        assert np.allclose(fc.lower[:, 0], x.mean() - z * sigma)

    def test_random_walk_sigma_scales_sqrt_h(self):
        x = np.random.default_rng(8).standard_normal(200).cumsum()
        result = fit(SarimaSpec(0, 1, 0), TimeSeries(x, period=1))
        fc = forecast(result, 10, [0.8])
        sigma = math.sqrt(result.params.sigma2)
        assert np.max(np.abs(fc.sigma_h - sigma * np.sqrt(np.arange(1, 11)))) <= 1e-9
        assert np.allclose(fc.point, x[-1])

    def test_psi_weights_random_walk_exact(self):
        spec = SarimaSpec(0, 1, 0)
        psi = psi_weights(spec, SarimaParams(sigma2=2.0), 20)
        assert np.max(np.abs(psi - 1.0)) <= 1e-9

    def test_intervals_nest_and_widen(self):
        sim = simulate(SarimaSpec(1, 0, 1), SarimaParams(phi=[0.6], theta=[0.3], sigma2=1.0),
                       300, seed=14)
        result = fit(SarimaSpec(1, 0, 1), sim)
        levels = [0.5, 0.8, 0.9, 0.95, 0.99]
        fc = forecast(result, 24, levels)
        for i in range(len(levels) - 1):
            assert np.all(fc.lower[:, i] >= fc.lower[:, i + 1])
            assert np.all(fc.upper[:, i] <= fc.upper[:, i + 1])
        assert np.all(fc.lower <= fc.point[:, None])
        assert np.all(fc.upper >= fc.point[:, None])
        mid = (fc.lower + fc.upper) / 2.0
        assert np.allclose(mid, fc.point[:, None], atol=1e-9)
        widths = fc.upper[:, -1] - fc.lower[:, -1]
        assert np.all(np.diff(widths) >= -1e-9)

    def test_bad_arguments(self):
        x = np.random.default_rng(1).standard_normal(50)
        result = fit(SarimaSpec(0, 0, 0, include_drift=True), TimeSeries(x, period=1))
        with pytest.raises(DataError):
            forecast(result, 0, [0.9])
        with pytest.raises(DataError):
            forecast(result, 5, [])
        with pytest.raises(DataError):
            forecast(result, 5, [1.2])


class TestSimulate:
    def test_zero_coefficients_is_seeded_noise(self):
        spec = SarimaSpec(0, 0, 0)
        sim = simulate(spec, SarimaParams(sigma2=1.0), 100, seed=5)
        rng = np.random.default_rng(5)
        expected = rng.standard_normal(200 + 100)[200:]
        assert np.allclose(sim.values, expected)

    def test_same_seed_identical(self):
        spec = SarimaSpec(2, 0, 1, 1, 0, 1, period=4)
        params = SarimaParams(phi=[0.4, 0.2], theta=[0.3], Phi=[0.5], Theta=[-0.3], sigma2=2.0)
        a = simulate(spec, params, 300, seed=42)
        b = simulate(spec, params, 300, seed=42)
        assert np.array_equal(a.values, b.values)

    def test_ar09_acf_band(self):
        from admitcast.series import acf

        sim = simulate(SarimaSpec(1, 0, 0), SarimaParams(phi=[0.9], sigma2=1.0), 5000, seed=42)
        r1 = acf(sim.values, 1).values[1]
        assert 0.86 < r1 < 0.94

    def test_expansion_orders(self):
        spec = SarimaSpec(1, 0, 1, 1, 0, 1, period=4)
        params = SarimaParams(phi=[0.5], theta=[0.2], Phi=[0.3], Theta=[-0.4], sigma2=1.0)
        phi_full, theta_full = expand_polynomials(params, spec)
        assert phi_full.size == 1 + 4
        assert theta_full.size == 1 + 4
        # (1-0.5B)(1-0.3B^4) = 1 - 0.5B - 0.3B^4 + 0.15B^5
        assert phi_full[0] == pytest.approx(0.5)
        assert phi_full[3] == pytest.approx(0.3)
        assert phi_full[4] == pytest.approx(-0.15)


class TestRecoverySmoke:
    """Compressed version of the acceptance round-trip suite (3 seeds each)."""

    CASES = [
        (SarimaSpec(1, 0, 0), SarimaParams(phi=[0.7], sigma2=1.0)),
        (SarimaSpec(0, 0, 1), SarimaParams(theta=[0.5], sigma2=1.0)),
        (SarimaSpec(1, 0, 1), SarimaParams(phi=[0.6], theta=[0.3], sigma2=1.0)),
        (SarimaSpec(1, 1, 1), SarimaParams(phi=[0.5], theta=[-0.4], sigma2=1.0)),
        (SarimaSpec(0, 1, 1, 0, 1, 1, period=4),
         SarimaParams(theta=[-0.3], Theta=[-0.5], sigma2=1.0)),
    ]

    @pytest.mark.parametrize("case", range(5))
    def test_roundtrip(self, case):
        spec, params = self.CASES[case]
        truth = params.free_coeffs(spec)
        hits = 0
        for seed in range(3):
            sim = simulate(spec, params, 500, seed=seed)
            result = fit(spec, sim)
            est = result.params.free_coeffs(spec)
            if result.converged and np.all(np.abs(est - truth) <= 3.0 * result.std_errors):
                hits += 1
        assert hits >= 2
