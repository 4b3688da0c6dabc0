"""Whiteness, unit-root/stationarity and normality tests.

Every test returns a uniform TestResult.  The unit-root family reports
p-values by linear interpolation in published critical-value tables; values
falling off a table are reported as inequality bounds (`at_most` the lowest
tabulated p, `at_least` the highest), which is why pipeline output shows
0.01 and 0.1 endpoints rather than tiny exact p-values.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2, norm

from .errors import DataError, ZeroVarianceError
from .series import acf

__all__ = [
    "PValueBound",
    "TestResult",
    "UnitRootHypothesis",
    "ljung_box",
    "adf_test",
    "kpss_test",
    "pp_test",
    "normality_battery",
    "shapiro_wilk",
    "shapiro_francia",
    "anderson_darling",
    "cramer_von_mises",
    "lilliefors_ks",
    "pearson_chi_square",
]


class UnitRootHypothesis(enum.Enum):
    """Deterministic component included in a unit-root regression."""

    NONE = "none"
    CONSTANT = "constant"
    CONSTANT_AND_TREND = "constant_and_trend"

    @classmethod
    def coerce(cls, value) -> "UnitRootHypothesis":
        if isinstance(value, cls):
            return value
        return cls(str(value))


@dataclass(frozen=True)
class PValueBound:
    """A p-value that may only be known as an inequality against a table edge."""

    kind: str  # "exact", "at_most" or "at_least"
    value: float

    def __post_init__(self):
        if self.kind not in ("exact", "at_most", "at_least"):
            raise DataError(f"unknown p-value kind {self.kind!r}")
        if not 0.0 <= self.value <= 1.0:
            raise DataError(f"p-value {self.value} outside [0, 1]")

    def rejects_at(self, alpha: float) -> bool:
        if self.kind == "at_least":
            # p >= value: never grounds for rejection on its own
            return False
        if self.kind == "at_most":
            return self.value <= alpha
        return self.value < alpha


@dataclass(frozen=True)
class TestResult:
    """Statistic, p-value (possibly a bound) and the alpha=0.05 decision."""

    test_name: str
    statistic: float
    p_value: float
    p_value_kind: str
    null_hypothesis: str
    rejected_at_05: bool

    @property
    def p_bound(self) -> PValueBound:
        return PValueBound(self.p_value_kind, self.p_value)


def _make_result(name: str, stat: float, bound: PValueBound, null_hyp: str) -> TestResult:
    return TestResult(
        test_name=name,
        statistic=float(stat),
        p_value=float(bound.value),
        p_value_kind=bound.kind,
        null_hypothesis=null_hyp,
        rejected_at_05=bound.rejects_at(0.05),
    )


def _exact(p: float) -> PValueBound:
    return PValueBound("exact", float(min(max(p, 0.0), 1.0)))


def _check_variance(x: np.ndarray, context: str) -> None:
    if x.size and float(np.var(x)) <= 0.0:
        raise ZeroVarianceError(f"{context} requires a series with positive variance")


# ---------------------------------------------------------------------------
# Ljung-Box


def ljung_box(residuals, m: int, fitdf: int = 0) -> TestResult:
    """Portmanteau whiteness statistic over the first m sample autocorrelations:

        Q(m) = n (n+2) sum_{j=1..m} r_j^2 / (n-j),   Q ~ chi2(m - fitdf).
    """
    x = np.asarray(residuals, dtype=float)
    n = x.size
    if m < 1:
        raise DataError(f"lag count m must be >= 1, got {m}")
    if m + 1 > n:
        raise DataError(f"lag count m={m} too large for {n} observations")
    if fitdf >= m:
        raise DataError(f"fitdf={fitdf} must be smaller than m={m}")
    _check_variance(x, "the Ljung-Box test")
    r = acf(x, m).values
    q = n * (n + 2.0) * float(np.sum(r[1:] ** 2 / (n - np.arange(1, m + 1))))
    p = chi2.sf(q, m - fitdf)
    return _make_result("ljung_box", q, _exact(p), "residuals are independently distributed")


# ---------------------------------------------------------------------------
# unit-root family: OLS helper and critical-value tables

_TABLE_N = np.array([25.0, 50.0, 100.0, 250.0, 500.0, 1e5])
_DF_P = np.array([0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99])

# Dickey-Fuller t-statistic percentiles, Fuller (1976) Table 8.5.2 as
# reprinted in Banerjee et al. (1993) Table 4.2; rows follow _TABLE_N.
_DF_TAU_NONE = np.array([
    [-2.66, -2.26, -1.95, -1.60, 0.92, 1.33, 1.70, 2.16],
    [-2.62, -2.25, -1.95, -1.61, 0.91, 1.31, 1.66, 2.08],
    [-2.60, -2.24, -1.95, -1.61, 0.90, 1.29, 1.64, 2.03],
    [-2.58, -2.23, -1.95, -1.62, 0.89, 1.29, 1.63, 2.01],
    [-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.63, 2.00],
    [-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00],
])
_DF_TAU_CONST = np.array([
    [-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72],
    [-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66],
    [-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63],
    [-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62],
    [-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61],
    [-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60],
])
_DF_TAU_TREND = np.array([
    [-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15],
    [-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24],
    [-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28],
    [-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31],
    [-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32],
    [-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33],
])
_DF_TABLES = {
    UnitRootHypothesis.NONE: _DF_TAU_NONE,
    UnitRootHypothesis.CONSTANT: _DF_TAU_CONST,
    UnitRootHypothesis.CONSTANT_AND_TREND: _DF_TAU_TREND,
}

# KPSS statistic percentiles, Kwiatkowski et al. (1992) Table 1.
_KPSS_P = np.array([0.10, 0.05, 0.025, 0.01])
_KPSS_CRIT = {
    UnitRootHypothesis.CONSTANT: np.array([0.347, 0.463, 0.574, 0.739]),
    UnitRootHypothesis.CONSTANT_AND_TREND: np.array([0.119, 0.146, 0.176, 0.216]),
}


def _dickey_fuller_p(stat: float, nobs: int, hypothesis: UnitRootHypothesis) -> PValueBound:
    table = _DF_TABLES[hypothesis]
    crits = np.array([np.interp(nobs, _TABLE_N, table[:, j]) for j in range(table.shape[1])])
    if stat < crits[0]:
        return PValueBound("at_most", float(_DF_P[0]))
    if stat > crits[-1]:
        return PValueBound("at_least", float(_DF_P[-1]))
    return _exact(float(np.interp(stat, crits, _DF_P)))


def _kpss_p(stat: float, hypothesis: UnitRootHypothesis) -> PValueBound:
    crits = _KPSS_CRIT[hypothesis]
    if stat < crits[0]:
        return PValueBound("at_least", float(_KPSS_P[0]))
    if stat > crits[-1]:
        return PValueBound("at_most", float(_KPSS_P[-1]))
    return _exact(float(np.interp(stat, crits, _KPSS_P)))


def _ols(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Least squares with coefficient standard errors; raises on singularity."""
    n, k = X.shape
    xtx = X.T @ X
    try:
        xtx_inv = np.linalg.inv(xtx)
    except np.linalg.LinAlgError as exc:
        raise DataError("singular regression matrix in unit-root test") from exc
    beta = xtx_inv @ (X.T @ y)
    resid = y - X @ beta
    dof = n - k
    if dof <= 0:
        raise DataError("not enough observations for the unit-root regression")
    s2 = float(resid @ resid) / dof
    se = np.sqrt(np.maximum(np.diag(xtx_inv) * s2, 0.0))
    return beta, se, resid


def _deterministic_columns(n: int, hypothesis: UnitRootHypothesis) -> list[np.ndarray]:
    cols = []
    if hypothesis in (UnitRootHypothesis.CONSTANT, UnitRootHypothesis.CONSTANT_AND_TREND):
        cols.append(np.ones(n))
    if hypothesis is UnitRootHypothesis.CONSTANT_AND_TREND:
        cols.append(np.arange(1.0, n + 1.0))
    return cols


def adf_test(series, hypothesis=UnitRootHypothesis.CONSTANT_AND_TREND, lag_order="auto") -> TestResult:
    """Augmented Dickey-Fuller regression

        dy_t = alpha + beta t + gamma y_{t-1} + sum_i delta_i dy_{t-i} + eps_t

    with the t-ratio of gamma-hat as statistic.  The default lag order is
    floor((n-1)^(1/3)).
    """
    hypothesis = UnitRootHypothesis.coerce(hypothesis)
    x = np.asarray(series, dtype=float)
    n = x.size
    if lag_order == "auto":
        k = int(math.floor((n - 1) ** (1.0 / 3.0)))
    else:
        k = int(lag_order)
    if k < 0:
        raise DataError(f"lag order must be nonnegative, got {k}")
    if n < k + 10:
        raise DataError(f"series of length {n} too short for ADF with {k} lags")
    _check_variance(x, "the ADF test")

    dy = np.diff(x)
    t0 = k  # first usable index into dy
    y_resp = dy[t0:]
    nobs = y_resp.size
    cols = _deterministic_columns(nobs, hypothesis)
    cols.append(x[t0: n - 1])  # lagged level
    for i in range(1, k + 1):
        cols.append(dy[t0 - i: dy.size - i])
    X = np.column_stack(cols)
    beta, se, _ = _ols(X, y_resp)
    level_idx = len(_deterministic_columns(1, hypothesis))
    if se[level_idx] == 0.0:
        raise DataError("degenerate ADF regression (zero standard error)")
    stat = float(beta[level_idx] / se[level_idx])
    bound = _dickey_fuller_p(stat, nobs, hypothesis)
    return _make_result("adf", stat, bound, "a unit root is present")


def _bartlett_long_run_variance(u: np.ndarray, lags: int) -> float:
    n = u.size
    s2 = float(u @ u) / n
    for j in range(1, lags + 1):
        w = 1.0 - j / (lags + 1.0)
        s2 += 2.0 * w * float(u[j:] @ u[:-j]) / n
    return s2


def kpss_test(series, hypothesis=UnitRootHypothesis.CONSTANT) -> TestResult:
    """KPSS stationarity statistic n^-2 sum_t S_t^2 / s^2(l) on the residuals
    of a level (constant) or trend regression, with Bartlett-window long-run
    variance at the conventional short bandwidth l = floor(4 (n/100)^(1/4))."""
    hypothesis = UnitRootHypothesis.coerce(hypothesis)
    if hypothesis is UnitRootHypothesis.NONE:
        raise DataError("the KPSS test requires a constant or trend hypothesis")
    x = np.asarray(series, dtype=float)
    n = x.size
    if n < 10:
        raise DataError(f"series of length {n} too short for the KPSS test")
    _check_variance(x, "the KPSS test")

    if hypothesis is UnitRootHypothesis.CONSTANT:
        resid = x - x.mean()
    else:
        X = np.column_stack(_deterministic_columns(n, hypothesis))
        beta, _, resid = _ols(X, x)
    lags = int(math.floor(4.0 * (n / 100.0) ** 0.25))
    s2l = _bartlett_long_run_variance(resid, lags)
    if s2l <= 0.0:
        raise ZeroVarianceError("KPSS long-run variance is not positive")
    partial = np.cumsum(resid)
    stat = float(partial @ partial) / (n * n * s2l)
    bound = _kpss_p(stat, hypothesis)
    null = "series is trend-stationary" if hypothesis is UnitRootHypothesis.CONSTANT_AND_TREND \
        else "series is level-stationary"
    return _make_result("kpss", stat, bound, null)


def pp_test(series, hypothesis=UnitRootHypothesis.CONSTANT_AND_TREND) -> TestResult:
    """Phillips-Perron Z(t) statistic: the Dickey-Fuller regression without
    lagged differences, with the t-ratio corrected nonparametrically for
    serial correlation through a Bartlett-window long-run variance."""
    hypothesis = UnitRootHypothesis.coerce(hypothesis)
    x = np.asarray(series, dtype=float)
    n = x.size
    if n < 10:
        raise DataError(f"series of length {n} too short for the Phillips-Perron test")
    _check_variance(x, "the Phillips-Perron test")

    y_resp = x[1:]
    nobs = y_resp.size
    cols = _deterministic_columns(nobs, hypothesis)
    cols.append(x[:-1])
    X = np.column_stack(cols)
    beta, se, resid = _ols(X, y_resp)
    level_idx = len(_deterministic_columns(1, hypothesis))
    rho, se_rho = float(beta[level_idx]), float(se[level_idx])
    if se_rho == 0.0:
        raise DataError("degenerate Phillips-Perron regression (zero standard error)")

    gamma0 = float(resid @ resid) / nobs
    lags = int(math.floor(4.0 * (nobs / 100.0) ** 0.25))
    lam2 = _bartlett_long_run_variance(resid, lags)
    if lam2 <= 0.0 or gamma0 <= 0.0:
        raise ZeroVarianceError("Phillips-Perron variance estimates are not positive")
    s_u = math.sqrt(float(resid @ resid) / (nobs - X.shape[1]))
    t_rho = (rho - 1.0) / se_rho
    stat = math.sqrt(gamma0 / lam2) * t_rho - (lam2 - gamma0) * nobs * se_rho / (
        2.0 * math.sqrt(lam2) * s_u
    )
    bound = _dickey_fuller_p(float(stat), nobs, hypothesis)
    return _make_result("phillips_perron", float(stat), bound, "a unit root is present")


# ---------------------------------------------------------------------------
# normality battery

_NORMAL_NULL = "residuals are normally distributed"


def _standardized_cdf_values(x: np.ndarray) -> np.ndarray:
    """Fitted-normal CDF at the order statistics (parameters estimated)."""
    xs = np.sort(x)
    sd = x.std(ddof=1)
    if sd <= 0.0:
        raise ZeroVarianceError("normality tests require positive variance")
    return norm.cdf((xs - x.mean()) / sd)


def shapiro_wilk(x) -> TestResult:
    """Shapiro-Wilk W with Royston's (1995) weight and p-value approximations."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 8:
        raise DataError(f"Shapiro-Wilk approximation needs n >= 8, got {n}")
    _check_variance(x, "the Shapiro-Wilk test")
    xs = np.sort(x)
    m = norm.ppf((np.arange(1, n + 1) - 0.375) / (n + 0.25))
    msq = float(m @ m)
    c = m / math.sqrt(msq)
    u = 1.0 / math.sqrt(n)
    a = np.empty(n)
    a_n = c[-1] + 0.221157 * u - 0.147981 * u**2 - 2.071190 * u**3 \
        + 4.434685 * u**4 - 2.706056 * u**5
    a_n1 = c[-2] + 0.042981 * u - 0.293762 * u**2 - 1.752461 * u**3 \
        + 5.682633 * u**4 - 3.582633 * u**5
    phi = (msq - 2.0 * m[-1] ** 2 - 2.0 * m[-2] ** 2) / (1.0 - 2.0 * a_n**2 - 2.0 * a_n1**2)
    a[2:-2] = m[2:-2] / math.sqrt(phi)
    a[-1], a[-2] = a_n, a_n1
    a[0], a[1] = -a_n, -a_n1
    num = float(a @ xs) ** 2
    den = float(np.sum((x - x.mean()) ** 2))
    w = num / den
    w = min(w, 1.0 - 1e-15)

    if n <= 11:
        g = -2.273 + 0.459 * n
        mu = 0.5440 - 0.39978 * n + 0.025054 * n**2 - 0.0006714 * n**3
        sigma = math.exp(1.3822 - 0.77857 * n + 0.062767 * n**2 - 0.0020322 * n**3)
        z = (-math.log(g - math.log(1.0 - w)) - mu) / sigma
    else:
        ln_n = math.log(n)
        mu = -1.5861 - 0.31082 * ln_n - 0.083751 * ln_n**2 + 0.0038915 * ln_n**3
        sigma = math.exp(-0.4803 - 0.082676 * ln_n + 0.0030302 * ln_n**2)
        z = (math.log(1.0 - w) - mu) / sigma
    return _make_result("shapiro_wilk", w, _exact(norm.sf(z)), _NORMAL_NULL)


def shapiro_francia(x) -> TestResult:
    """Shapiro-Francia W': squared correlation of order statistics with Blom scores."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 5:
        raise DataError(f"Shapiro-Francia needs n >= 5, got {n}")
    _check_variance(x, "the Shapiro-Francia test")
    xs = np.sort(x)
    m = norm.ppf((np.arange(1, n + 1) - 0.375) / (n + 0.25))
    w = float(np.corrcoef(xs, m)[0, 1]) ** 2
    w = min(w, 1.0 - 1e-15)
    u, v = math.log(n), math.log(math.log(n))
    mu = -1.2725 + 1.0521 * (v - u)
    sigma = 1.0308 - 0.26758 * (v + 2.0 / u)
    z = (math.log(1.0 - w) - mu) / sigma
    return _make_result("shapiro_francia", w, _exact(norm.sf(z)), _NORMAL_NULL)


def anderson_darling(x) -> TestResult:
    """Anderson-Darling A^2 with the case-3 (both parameters estimated)
    small-sample modification and Stephens' p-value approximation."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 8:
        raise DataError(f"Anderson-Darling battery entry needs n >= 8, got {n}")
    p = _standardized_cdf_values(x)
    eps = np.finfo(float).tiny
    i = np.arange(1, n + 1)
    a2 = -n - float(np.mean((2 * i - 1) * (np.log(p + eps) + np.log1p(-p[::-1] + eps))))
    a_mod = a2 * (1.0 + 0.75 / n + 2.25 / n**2)
    if a_mod < 0.2:
        pv = 1.0 - math.exp(-13.436 + 101.14 * a_mod - 223.73 * a_mod**2)
    elif a_mod < 0.34:
        pv = 1.0 - math.exp(-8.318 + 42.796 * a_mod - 59.938 * a_mod**2)
    elif a_mod < 0.6:
        pv = math.exp(0.9177 - 4.279 * a_mod - 1.38 * a_mod**2)
    elif a_mod < 10.0:
        pv = math.exp(1.2937 - 5.709 * a_mod + 0.0186 * a_mod**2)
    else:
        pv = 3.7e-24
    return _make_result("anderson_darling", a2, _exact(pv), _NORMAL_NULL)


def cramer_von_mises(x) -> TestResult:
    """Cramer-von Mises W^2 against the fitted normal, Csorgo-Faraway p-values."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 8:
        raise DataError(f"Cramer-von Mises battery entry needs n >= 8, got {n}")
    p = _standardized_cdf_values(x)
    i = np.arange(1, n + 1)
    w2 = 1.0 / (12.0 * n) + float(np.sum((p - (2 * i - 1) / (2.0 * n)) ** 2))
    w_mod = w2 * (1.0 + 0.5 / n)
    if w_mod < 0.0275:
        pv = 1.0 - math.exp(-13.953 + 775.5 * w_mod - 12542.61 * w_mod**2)
    elif w_mod < 0.051:
        pv = 1.0 - math.exp(-5.903 + 179.546 * w_mod - 1515.29 * w_mod**2)
    elif w_mod < 0.092:
        pv = math.exp(0.886 - 31.62 * w_mod + 10.897 * w_mod**2)
    elif w_mod < 1.1:
        pv = math.exp(1.111 - 34.242 * w_mod + 12.832 * w_mod**2)
    else:
        pv = 7.37e-10
    return _make_result("cramer_von_mises", w2, _exact(pv), _NORMAL_NULL)


def lilliefors_ks(x) -> TestResult:
    """Kolmogorov-Smirnov D with the Lilliefors correction for estimated
    parameters; Dallal-Wilkinson (1986) and Stephens p-value approximations."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 8:
        raise DataError(f"Lilliefors battery entry needs n >= 8, got {n}")
    p = _standardized_cdf_values(x)
    i = np.arange(1, n + 1)
    d_plus = float(np.max(i / n - p))
    d_minus = float(np.max(p - (i - 1) / n))
    d = max(d_plus, d_minus)
    if n <= 100:
        kd, nd = d, float(n)
    else:
        kd, nd = d * (n / 100.0) ** 0.49, 100.0
    pv = math.exp(
        -7.01256 * kd**2 * (nd + 2.78019)
        + 2.99587 * kd * math.sqrt(nd + 2.78019)
        - 0.122119 + 0.974598 / math.sqrt(nd) + 1.67997 / nd
    )
    if pv > 0.1:
        kk = (math.sqrt(n) - 0.01 + 0.85 / math.sqrt(n)) * d
        if kk <= 0.302:
            pv = 1.0
        elif kk <= 0.5:
            pv = 2.76773 - 19.828315 * kk + 80.709644 * kk**2 - 138.55152 * kk**3 + 81.541484 * kk**4
        elif kk <= 0.9:
            pv = -4.901232 + 40.662806 * kk - 97.490286 * kk**2 + 94.029866 * kk**3 - 32.355711 * kk**4
        elif kk <= 1.31:
            pv = 6.198765 - 19.558097 * kk + 23.186922 * kk**2 - 12.234627 * kk**3 + 2.423045 * kk**4
        else:
            pv = 0.0
    return _make_result("kolmogorov_smirnov", d, _exact(pv), _NORMAL_NULL)


def pearson_chi_square(x) -> TestResult:
    """Pearson chi-squared on ceil(2 n^(2/5)) equiprobable classes of the
    fitted normal; degrees of freedom are classes - 3 (two parameters
    estimated)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 8:
        raise DataError(f"Pearson chi-square battery entry needs n >= 8, got {n}")
    sd = x.std(ddof=1)
    if sd <= 0.0:
        raise ZeroVarianceError("normality tests require positive variance")
    n_classes = math.ceil(2.0 * n ** 0.4)
    if n_classes < 4:
        raise DataError("too few observations for the Pearson chi-square classes")
    edges = norm.ppf(np.arange(1, n_classes) / n_classes)
    counts = np.bincount(
        np.searchsorted(edges, (x - x.mean()) / sd, side="right"), minlength=n_classes
    )
    expected = n / n_classes
    stat = float(np.sum((counts - expected) ** 2) / expected)
    pv = chi2.sf(stat, n_classes - 3)
    return _make_result("pearson_chi_square", stat, _exact(pv), _NORMAL_NULL)


def normality_battery(residuals) -> list[TestResult]:
    """All six residual normality tests, reported in a fixed order."""
    x = np.asarray(residuals, dtype=float)
    if x.size < 8:
        raise DataError(f"the normality battery needs at least 8 residuals, got {x.size}")
    _check_variance(x, "the normality battery")
    return [
        anderson_darling(x),
        shapiro_wilk(x),
        cramer_von_mises(x),
        lilliefors_ks(x),
        pearson_chi_square(x),
        shapiro_francia(x),
    ]
