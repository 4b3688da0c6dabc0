"""Core weekly-series container, differencing and autocorrelation machinery.

Everything here is a pure function of its inputs; the TimeSeries container is
an immutable value object.  Differencing applies the seasonal operator first
and the non-seasonal operator second, so the inverse transform is unambiguous.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, ZeroVarianceError

__all__ = [
    "TimeSeries",
    "DifferenceSpec",
    "CorrelogramResult",
    "difference",
    "undifference",
    "extend_series",
    "acf",
    "pacf",
    "seasonal_table",
]


@dataclass(frozen=True)
class TimeSeries:
    """Ordered weekly observations with a seasonal cycle length.

    `start_date` is plot metadata only; all operations are positional.
    """

    values: np.ndarray
    start_date: _dt.date = _dt.date(2012, 3, 1)
    period: int = 52

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise DataError(f"series must be 1-dimensional, got shape {values.shape}")
        if values.size < 1:
            raise DataError("series must contain at least one observation")
        if not np.all(np.isfinite(values)):
            raise DataError("series contains NaN or infinite entries")
        if self.period < 1:
            raise DataError(f"period must be >= 1, got {self.period}")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class DifferenceSpec:
    """Non-seasonal order d, seasonal order D and the seasonal lag."""

    d: int = 0
    D: int = 0
    period: int = 1

    def __post_init__(self):
        if self.d < 0 or self.D < 0:
            raise DataError(f"difference orders must be nonnegative, got d={self.d}, D={self.D}")
        if self.period < 1:
            raise DataError(f"period must be >= 1, got {self.period}")

    @property
    def head_length(self) -> int:
        """Number of leading observations consumed by the transform."""
        return self.d + self.D * self.period


@dataclass(frozen=True)
class CorrelogramResult:
    """Sample (partial) autocorrelations with the white-noise band."""

    lags: np.ndarray
    values: np.ndarray
    ci_bound: float = field(default=0.0)


def _as_values(series) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.values
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise DataError(f"expected a 1-dimensional series, got shape {x.shape}")
    return x


def _diff_once(x: np.ndarray, lag: int) -> np.ndarray:
    return x[lag:] - x[:-lag]


def difference(series, spec: DifferenceSpec) -> np.ndarray:
    """Apply seasonal differencing D times, then non-seasonal differencing d times.

    Output length is n - d - D*period.
    """
    x = _as_values(series)
    if x.size <= spec.head_length:
        raise DataError(
            f"series of length {x.size} too short for d={spec.d}, D={spec.D}, "
            f"period={spec.period} (needs more than {spec.head_length} observations)"
        )
    for _ in range(spec.D):
        x = _diff_once(x, spec.period)
    for _ in range(spec.d):
        x = _diff_once(x, 1)
    return x


def _head_stack(head: np.ndarray, spec: DifferenceSpec) -> list[tuple[np.ndarray, int]]:
    """Intermediate leading values at each differencing level, with the lag applied next."""
    levels = []
    x = head
    for _ in range(spec.D):
        levels.append((x, spec.period))
        x = _diff_once(x, spec.period)
    for _ in range(spec.d):
        levels.append((x, 1))
        x = _diff_once(x, 1)
    return levels


def undifference(diffed, spec: DifferenceSpec, head) -> np.ndarray:
    """Invert `difference`.

    `head` must hold the d + D*period leading values of the original series;
    the round trip undifference(difference(x, s), s, x[:s.head_length]) is exact.
    """
    w = _as_values(diffed)
    head = _as_values(head)
    if head.size != spec.head_length:
        raise DataError(
            f"head must supply exactly {spec.head_length} values, got {head.size}"
        )
    out = w
    for prefix, lag in reversed(_head_stack(head, spec)):
        rebuilt = np.empty(out.size + lag)
        rebuilt[: prefix.size] = prefix
        for i in range(prefix.size, rebuilt.size):
            rebuilt[i] = out[i - lag] + rebuilt[i - lag]
        out = rebuilt
    return out


def extend_series(history, future_diffed, spec: DifferenceSpec) -> np.ndarray:
    """Map future values on the differenced scale back to the original scale.

    Returns only the continuation (length = len(future_diffed)); the observed
    history supplies the integration constants.
    """
    x = _as_values(history)
    w_hist = difference(x, spec)
    w_all = np.concatenate([w_hist, _as_values(future_diffed)])
    full = undifference(w_all, spec, x[: spec.head_length])
    return full[x.size:]


def _demeaned(series) -> tuple[np.ndarray, float]:
    x = _as_values(series)
    if x.size < 2:
        raise DataError("autocorrelation requires at least 2 observations")
    centered = x - x.mean()
    denom = float(np.dot(centered, centered))
    if denom <= 0.0:
        raise ZeroVarianceError("series has zero sample variance")
    return centered, denom


def acf(series, max_lag: int) -> CorrelogramResult:
    """Sample autocorrelation function, biased (divide-by-n) convention.

    r_j = sum_{t<=n-j} (x_t - xbar)(x_{t+j} - xbar) / sum_t (x_t - xbar)^2
    """
    centered, denom = _demeaned(series)
    n = centered.size
    if not 0 <= max_lag < n:
        raise DataError(f"max_lag must lie in [0, {n - 1}], got {max_lag}")
    values = np.empty(max_lag + 1)
    values[0] = 1.0
    for j in range(1, max_lag + 1):
        values[j] = np.dot(centered[:-j], centered[j:]) / denom
    return CorrelogramResult(
        lags=np.arange(max_lag + 1),
        values=values,
        ci_bound=1.96 / np.sqrt(n),
    )


def pacf_durbin_levinson(autocorr: np.ndarray) -> np.ndarray:
    """Partial autocorrelations from sample ACF values r_0..r_m (r_0 = 1)."""
    m = autocorr.size - 1
    pacf_vals = np.empty(m + 1)
    pacf_vals[0] = 1.0
    phi_prev = np.zeros(m + 1)
    for k in range(1, m + 1):
        num = autocorr[k] - np.dot(phi_prev[1:k], autocorr[k - 1:0:-1])
        den = 1.0 - np.dot(phi_prev[1:k], autocorr[1:k])
        if den == 0.0:
            raise DataError(f"Durbin-Levinson recursion degenerate at lag {k}")
        phi_kk = num / den
        phi_new = phi_prev.copy()
        phi_new[k] = phi_kk
        for j in range(1, k):
            phi_new[j] = phi_prev[j] - phi_kk * phi_prev[k - j]
        pacf_vals[k] = phi_kk
        phi_prev = phi_new
    return pacf_vals


def pacf(series, max_lag: int) -> CorrelogramResult:
    """Sample partial autocorrelations via the Durbin-Levinson recursion."""
    if max_lag < 1:
        raise DataError(f"max_lag must be >= 1 for the PACF, got {max_lag}")
    base = acf(series, max_lag)
    values = pacf_durbin_levinson(base.values)
    return CorrelogramResult(lags=base.lags, values=values, ci_bound=base.ci_bound)


def seasonal_table(series: TimeSeries) -> list[np.ndarray]:
    """Slice the series into seasonal cycles; one row per cycle, last possibly partial."""
    if series.period < 2:
        raise DataError(f"seasonal table requires period >= 2, got {series.period}")
    x = series.values
    return [x[i: i + series.period] for i in range(0, x.size, series.period)]
