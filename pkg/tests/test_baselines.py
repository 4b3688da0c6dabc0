import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from admitcast.baselines import (
    drift_forecast,
    holt_forecast,
    mean_forecast,
    naive_forecast,
    seasonal_naive_forecast,
    ses_forecast,
)
from admitcast.errors import DataError
from admitcast.series import TimeSeries

finite_series = st.lists(
    st.floats(min_value=-1e4, max_value=1e4, allow_nan=False), min_size=4, max_size=40
)


def test_mean_examples():
    assert np.allclose(mean_forecast([2.0, 4.0, 6.0], 2).point, [4.0, 4.0])
    assert np.allclose(mean_forecast(np.full(7, 3.5), 3).point, 3.5)


def test_naive_examples():
    assert np.allclose(naive_forecast([1.0, 5.0, 9.0], 3).point, [9.0, 9.0, 9.0])
    assert np.allclose(naive_forecast([4.0], 1).point, [4.0])


def test_seasonal_naive_recycles():
    ts = TimeSeries(np.arange(1.0, 9.0), period=4)
    assert np.allclose(seasonal_naive_forecast(ts, 4).point, [5, 6, 7, 8])
    assert np.allclose(seasonal_naive_forecast(ts, 8).point, [5, 6, 7, 8, 5, 6, 7, 8])


def test_seasonal_naive_needs_full_period(
):
    with pytest.raises(DataError):
        seasonal_naive_forecast(TimeSeries(np.arange(3.0), period=4), 2)


def test_drift_examples():
    assert np.allclose(drift_forecast([1.0, 2.0, 3.0, 4.0, 5.0], 2).point, [6.0, 7.0])
    assert np.allclose(drift_forecast(np.full(6, 2.0), 4).point, 2.0)
    with pytest.raises(DataError):
        drift_forecast([1.0], 1)


def test_ses_alpha_one_is_naive():
    y = np.random.default_rng(0).standard_normal(40).cumsum()
    assert np.allclose(ses_forecast(y, 5, alpha=1.0).point, naive_forecast(y, 5).point)


def test_ses_alpha_zero_is_first_value():
    y = np.random.default_rng(1).standard_normal(30)
    assert np.allclose(ses_forecast(y, 3, alpha=0.0).point, y[0])


def test_ses_alpha_out_of_range():
    with pytest.raises(DataError):
        ses_forecast(np.arange(10.0), 2, alpha=1.5)


def test_holt_beta_zero_with_zero_trend_is_ses():
    y = np.random.default_rng(2).standard_normal(50).cumsum()
    holt = holt_forecast(y, 6, alpha=0.4, beta=0.0, initial_trend=0.0)
    ses = ses_forecast(y, 6, alpha=0.4)
    assert np.allclose(holt.point, ses.point)


def test_holt_tracks_line_exactly():
    y = 2.0 * np.arange(1, 25)
    result = holt_forecast(y, 3, alpha=1.0, beta=1.0)
    assert np.allclose(result.point, [2 * 25, 2 * 26, 2 * 27])


def test_holt_auto_params_in_bounds():
    y = np.random.default_rng(3).standard_normal(60).cumsum() + 50
    result = holt_forecast(y, 4)
    assert 0.0 < result.params["alpha"] < 1.0
    assert 0.0 < result.params["beta"] < 1.0


def test_seasonal_naive_period_one_is_naive():
    y = np.random.default_rng(4).standard_normal(25)
    ts = TimeSeries(y, period=1)
    assert np.allclose(seasonal_naive_forecast(ts, 7).point, naive_forecast(ts, 7).point)


def test_drift_equals_naive_iff_endpoints_match():
    flat = np.array([3.0, 8.0, 1.0, 3.0])  # y_1 == y_n
    assert np.allclose(drift_forecast(flat, 5).point, naive_forecast(flat, 5).point)
    sloped = np.array([1.0, 8.0, 1.0, 3.0])
    assert not np.allclose(drift_forecast(sloped, 5).point, naive_forecast(sloped, 5).point)


@settings(max_examples=40, deadline=None)
@given(value=st.floats(min_value=-1e4, max_value=1e4, allow_nan=False),
       n=st.integers(8, 30), h=st.integers(1, 10))
def test_all_methods_forecast_constant_as_constant(value, n, h):
    ts = TimeSeries(np.full(n, value), period=4)
    for method in (mean_forecast, naive_forecast, seasonal_naive_forecast,
                   drift_forecast):
        assert np.allclose(method(ts, h).point, value)
    assert np.allclose(ses_forecast(ts, h, alpha=0.3).point, value)
    assert np.allclose(holt_forecast(ts, h, alpha=0.3, beta=0.1).point, value)


@settings(max_examples=25, deadline=None)
@given(data=finite_series, h=st.integers(1, 8))
def test_point_length_matches_horizon(data, h):
    ts = TimeSeries(np.asarray(data), period=2)
    for method in (mean_forecast, naive_forecast, drift_forecast):
        result = method(ts, h)
        assert result.point.size == h
        assert result.fitted.size == len(data)
