"""Six comparison forecasters: mean, naive, seasonal naive, drift, SES, Holt.

All six share one output shape so the holdout comparison can treat them
uniformly.  Smoothing parameters marked "auto" are chosen by minimizing the
in-sample sum of squared one-step errors (golden-section for the single SES
parameter, Nelder-Mead for Holt's pair).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError
from .optimize import golden_section, minimize
from .series import TimeSeries

__all__ = [
    "BaselineForecast",
    "mean_forecast",
    "naive_forecast",
    "seasonal_naive_forecast",
    "drift_forecast",
    "ses_forecast",
    "holt_forecast",
    "BASELINE_METHODS",
]

_PARAM_BOUNDS = (1e-4, 1.0 - 1e-4)


@dataclass(frozen=True)
class BaselineForecast:
    method: str
    point: np.ndarray
    fitted: np.ndarray
    params: dict = field(default_factory=dict)


def _train_values(train) -> np.ndarray:
    if isinstance(train, TimeSeries):
        return train.values
    return np.asarray(train, dtype=float)


def _check_horizon(h: int) -> None:
    if h < 1:
        raise DataError(f"forecast horizon must be >= 1, got {h}")


def mean_forecast(train, h: int) -> BaselineForecast:
    """Every point forecast equals the training mean."""
    y = _train_values(train)
    _check_horizon(h)
    mean = float(y.mean())
    return BaselineForecast(
        method="mean",
        point=np.full(h, mean),
        fitted=np.full(y.size, mean),
        params={"mean": mean},
    )


def naive_forecast(train, h: int) -> BaselineForecast:
    """Last observation carried forward."""
    y = _train_values(train)
    _check_horizon(h)
    fitted = np.full(y.size, np.nan)
    fitted[1:] = y[:-1]
    return BaselineForecast(method="naive", point=np.full(h, float(y[-1])), fitted=fitted)


def seasonal_naive_forecast(train, h: int) -> BaselineForecast:
    """Forecast step k repeats the observation one full period earlier."""
    y = _train_values(train)
    _check_horizon(h)
    period = train.period if isinstance(train, TimeSeries) else 1
    if y.size < period:
        raise DataError(
            f"seasonal naive needs at least one full period ({period}), got {y.size}"
        )
    point = np.array([y[y.size - period + (k % period)] for k in range(h)])
    fitted = np.full(y.size, np.nan)
    fitted[period:] = y[:-period]
    return BaselineForecast(method="seasonal_naive", point=point, fitted=fitted,
                            params={"period": period})


def drift_forecast(train, h: int) -> BaselineForecast:
    """Line through the first and last observations, extended forward."""
    y = _train_values(train)
    _check_horizon(h)
    if y.size < 2:
        raise DataError("drift forecast needs at least 2 observations")
    slope = (y[-1] - y[0]) / (y.size - 1)
    point = y[-1] + slope * np.arange(1, h + 1)
    fitted = np.full(y.size, np.nan)
    fitted[1:] = y[:-1] + slope
    return BaselineForecast(method="drift", point=point, fitted=fitted,
                            params={"slope": float(slope)})


def _ses_pass(y: np.ndarray, alpha: float) -> tuple[np.ndarray, float]:
    """One-step fits and final level; level starts at the first observation."""
    fitted = np.empty(y.size)
    level = y[0]
    for t in range(y.size):
        fitted[t] = level
        level = alpha * y[t] + (1.0 - alpha) * level
    return fitted, float(level)


def ses_forecast(train, h: int, alpha="auto") -> BaselineForecast:
    """Simple exponential smoothing with a flat forecast at the final level."""
    y = _train_values(train)
    _check_horizon(h)
    if y.size < 2:
        raise DataError("simple exponential smoothing needs at least 2 observations")
    if alpha == "auto":
        lo, hi = _PARAM_BOUNDS

        def sse(a: float) -> float:
            fitted, _ = _ses_pass(y, a)
            err = y - fitted
            return float(err @ err)

        alpha = golden_section(sse, lo, hi)
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise DataError(f"alpha must lie in [0, 1], got {alpha}")
    fitted, level = _ses_pass(y, alpha)
    return BaselineForecast(method="ses", point=np.full(h, level), fitted=fitted,
                            params={"alpha": alpha})


def _holt_pass(y: np.ndarray, alpha: float, beta: float,
               initial_trend: float | None) -> tuple[np.ndarray, float, float]:
    level = y[0]
    trend = (y[1] - y[0]) if initial_trend is None else float(initial_trend)
    fitted = np.empty(y.size)
    for t in range(y.size):
        fitted[t] = level + trend
        new_level = alpha * y[t] + (1.0 - alpha) * (level + trend)
        trend = beta * (new_level - level) + (1.0 - beta) * trend
        level = new_level
    return fitted, float(level), float(trend)


def holt_forecast(train, h: int, alpha="auto", beta="auto",
                  initial_trend: float | None = None) -> BaselineForecast:
    """Holt's linear-trend smoothing; forecast step k is level + k * trend.

    The default initial trend is y_2 - y_1; pass initial_trend=0.0 to freeze
    the beta=0 case into plain SES behaviour.
    """
    y = _train_values(train)
    _check_horizon(h)
    if y.size < 3:
        raise DataError("Holt's method needs at least 3 observations")
    auto = alpha == "auto" or beta == "auto"
    if auto:
        lo, hi = _PARAM_BOUNDS

        def sse(u: np.ndarray) -> float:
            a = min(max(u[0], lo), hi)
            b = min(max(u[1], lo), hi)
            fitted, _, _ = _holt_pass(y, a, b, initial_trend)
            err = y - fitted
            return float(err @ err)

        start = np.array([
            0.2 if alpha == "auto" else float(alpha),
            0.1 if beta == "auto" else float(beta),
        ])
        best = minimize(sse, start, step=0.2, max_eval=400)
        alpha = min(max(best.x[0], lo), hi) if alpha == "auto" else float(alpha)
        beta = min(max(best.x[1], lo), hi) if beta == "auto" else float(beta)
    alpha, beta = float(alpha), float(beta)
    for name, val in (("alpha", alpha), ("beta", beta)):
        if not 0.0 <= val <= 1.0:
            raise DataError(f"{name} must lie in [0, 1], got {val}")
    fitted, level, trend = _holt_pass(y, alpha, beta, initial_trend)
    point = level + trend * np.arange(1, h + 1)
    return BaselineForecast(method="holt", point=point, fitted=fitted,
                            params={"alpha": alpha, "beta": beta})


BASELINE_METHODS = {
    "mean": mean_forecast,
    "naive": naive_forecast,
    "seasonal_naive": seasonal_naive_forecast,
    "drift": drift_forecast,
    "ses": ses_forecast,
    "holt": holt_forecast,
}
