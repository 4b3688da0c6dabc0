import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import toeplitz

from admitcast.errors import DataError, ZeroVarianceError
from admitcast.series import (
    DifferenceSpec,
    TimeSeries,
    acf,
    difference,
    extend_series,
    pacf,
    seasonal_table,
    undifference,
)


class TestDifference:
    def test_first_difference(self):
        assert np.allclose(difference([1, 3, 6], DifferenceSpec(1, 0, 1)), [2, 3])

    def test_second_difference_expansion(self):
        x = np.random.default_rng(0).standard_normal(30)
        got = difference(x, DifferenceSpec(2, 0, 1))
        assert np.allclose(got, x[2:] - 2 * x[1:-1] + x[:-2])

    def test_identity(self):
        x = np.arange(5.0)
        assert np.allclose(difference(x, DifferenceSpec(0, 0, 1)), x)

    def test_seasonal_then_regular_order(self):
        x = np.random.default_rng(1).standard_normal(20)
        got = difference(x, DifferenceSpec(1, 1, 4))
        seasonal = x[4:] - x[:-4]
        assert np.allclose(got, np.diff(seasonal))

    def test_too_short(self):
        with pytest.raises(DataError):
            difference([1.0, 2.0], DifferenceSpec(1, 1, 4))


class TestUndifference:
    def test_round_trip_simple(self):
        x = np.array([1.0, 3.0, 6.0, 10.0])
        spec = DifferenceSpec(1, 0, 1)
        back = undifference(difference(x, spec), spec, x[:1])
        assert np.allclose(back, x, atol=1e-9)

    def test_identity(self):
        x = np.arange(6.0)
        spec = DifferenceSpec(0, 0, 1)
        assert np.allclose(undifference(x, spec, np.zeros(0)), x)

    def test_ramp_seasonal_round_trip(self):
        ramp = np.arange(12.0)
        spec = DifferenceSpec(1, 1, 4)
        back = undifference(difference(ramp, spec), spec, ramp[:5])
        assert np.allclose(back, ramp, atol=1e-9)

    def test_head_length_mismatch(self):
        with pytest.raises(DataError):
            undifference([1.0, 2.0], DifferenceSpec(1, 0, 1), [1.0, 2.0])

    @settings(max_examples=60, deadline=None)
    @given(
        d=st.integers(0, 4),
        D=st.integers(0, 1),
        period=st.sampled_from([4, 12, 52]),
        seed=st.integers(0, 2**31 - 1),
    )
    def test_round_trip_property(self, d, D, period, seed):
        spec = DifferenceSpec(d, D, period)
        x = np.random.default_rng(seed).standard_normal(spec.head_length + 40)
        back = undifference(difference(x, spec), spec, x[: spec.head_length])
        assert np.max(np.abs(back - x)) <= 1e-9

    def test_extend_series_continues_history(self):
        spec = DifferenceSpec(1, 1, 4)
        full = np.arange(15.0) ** 1.5
        w_full = difference(full, spec)
        history = full[:12]
        future = extend_series(history, w_full[-3:], spec)
        assert np.allclose(future, full[12:], atol=1e-9)


class TestAcf:
    def test_lag_zero_is_one(self):
        r = acf(np.random.default_rng(2).standard_normal(50), 5)
        assert r.values[0] == 1.0

    def test_alternating_series(self):
        r = acf([1.0, -1.0, 1.0, -1.0], 1)
        assert abs(r.values[1] - (-0.75)) < 1e-12

    def test_constant_series_errors(self):
        with pytest.raises(ZeroVarianceError):
            acf(np.full(20, 3.0), 3)

    def test_ci_bound(self):
        r = acf(np.random.default_rng(3).standard_normal(400), 10)
        assert abs(r.ci_bound - 1.96 / 20.0) < 1e-12

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1), n=st.integers(10, 200))
    def test_bounded_by_one(self, seed, n):
        x = np.random.default_rng(seed).standard_normal(n)
        r = acf(x, min(n - 1, 12))
        assert np.all(np.abs(r.values) <= 1.0 + 1e-9)

    def test_white_noise_band(self):
        x = np.random.default_rng(42).standard_normal(1000)
        r = acf(x, 20)
        outside = np.sum(np.abs(r.values[1:]) > r.ci_bound)
        assert outside <= 2  # at most 10% of lags 1..20


class TestPacf:
    def test_lag_one_equals_acf(self):
        x = np.random.default_rng(4).standard_normal(80)
        assert abs(pacf(x, 5).values[1] - acf(x, 5).values[1]) < 1e-12

    def test_alternating_series(self):
        assert abs(pacf([1.0, -1.0, 1.0, -1.0], 1).values[1] - (-0.75)) < 1e-12

    def test_ar1_cuts_off(self):
        from admitcast.sarima import SarimaParams, SarimaSpec, simulate

        sim = simulate(SarimaSpec(1, 0, 0), SarimaParams(phi=[0.7], sigma2=1.0),
                       2000, seed=7)
        p = pacf(sim.values, 10)
        band = 2.0 / np.sqrt(2000)
        assert np.all(np.abs(p.values[2:]) < band)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1))
    def test_matches_yule_walker_solve(self, seed):
        x = np.random.default_rng(seed).standard_normal(300)
        r = acf(x, 8).values
        dl = pacf(x, 8).values
        for k in range(1, 9):
            direct = np.linalg.solve(toeplitz(r[:k]), r[1:k + 1])[-1]
            assert abs(direct - dl[k]) < 1e-6


class TestSeasonalTable:
    def test_exact_reshape(self):
        rows = seasonal_table(TimeSeries(np.arange(104.0), period=52))
        assert len(rows) == 2 and all(r.size == 52 for r in rows)

    def test_partial_last_row(self):
        rows = seasonal_table(TimeSeries(np.arange(244.0), period=52))
        assert len(rows) == 5
        assert [r.size for r in rows] == [52, 52, 52, 52, 36]

    def test_single_partial_cycle(self):
        rows = seasonal_table(TimeSeries(np.arange(10.0), period=52))
        assert len(rows) == 1 and rows[0].size == 10

    def test_period_one_rejected(self):
        with pytest.raises(DataError):
            seasonal_table(TimeSeries(np.arange(10.0), period=1))


class TestTimeSeries:
    def test_rejects_nan(self):
        with pytest.raises(DataError):
            TimeSeries(np.array([1.0, np.nan]))

    def test_rejects_empty(self):
        with pytest.raises(DataError):
            TimeSeries(np.array([]))

    def test_rejects_bad_period(self):
        with pytest.raises(DataError):
            TimeSeries(np.arange(5.0), period=0)
