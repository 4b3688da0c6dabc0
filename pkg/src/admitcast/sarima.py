"""Seasonal ARIMA estimation by exact Gaussian maximum likelihood.

Model, plus-sign MA convention throughout (coefficients are therefore
directly comparable to R-style output):

    phi(B) PHI(B^m) (1-B)^d (1-B^m)^D (Y_t - mu_t) = theta(B) THETA(B^m) e_t

where mu_t is a constant mean on the differenced scale ("mean" when
d + D = 0, "drift" otherwise).  The likelihood is the exact one obtained
from the prediction-error decomposition of a Kalman filter over the
ARMA(p + mP, q + mQ) state-space form of the differenced series, with the
stationary initial state covariance.

Free coefficients are optimized through the partial-autocorrelation
reparameterization, so every optimizer iterate is stationary/invertible by
construction.  A conditional-sum-of-squares pass supplies starting values;
Nelder-Mead with seeded jitter restarts does the maximization; standard
errors come from the numeric Hessian of the negative log-likelihood mapped
back to the reported coordinates by the delta method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from ._kernels import arma_recursion, css_residuals, kalman_filter
from .errors import ConvergenceError, DataError
from .optimize import minimize
from .series import DifferenceSpec, TimeSeries, difference, extend_series

__all__ = [
    "SarimaSpec",
    "SarimaParams",
    "SarimaFit",
    "ForecastResult",
    "loglik",
    "fit",
    "forecast",
    "simulate",
    "information_criteria",
]

_LOG_2PI = math.log(2.0 * math.pi)
_SIGMA2_FLOOR = 1e-300  # degenerate perfect fits (zero residuals) stay finite
_PENALTY = 1e12


@dataclass(frozen=True)
class SarimaSpec:
    """Model orders (p, d, q)(P, D, Q)_period plus the mean/drift switch.

    `include_drift` requests a constant term on the differenced scale: the
    series mean when d + D = 0 (labelled "mean"), the drift otherwise
    (labelled "drift", allowed only for d + D = 1).
    """

    p: int = 0
    d: int = 0
    q: int = 0
    P: int = 0
    D: int = 0
    Q: int = 0
    period: int = 1
    include_drift: bool = False

    def __post_init__(self):
        for name in ("p", "d", "q", "P", "D", "Q"):
            if getattr(self, name) < 0:
                raise DataError(f"order {name} must be nonnegative")
        if self.period < 1:
            raise DataError(f"period must be >= 1, got {self.period}")
        if (self.P or self.D or self.Q) and self.period < 2:
            raise DataError("seasonal orders require period >= 2")
        if self.include_drift and self.d + self.D > 1:
            raise DataError("drift term requires d + D <= 1")

    @property
    def diff_spec(self) -> DifferenceSpec:
        return DifferenceSpec(self.d, self.D, self.period)

    @property
    def n_coeffs(self) -> int:
        """Free coefficients excluding sigma2."""
        return self.p + self.q + self.P + self.Q + int(self.include_drift)

    @property
    def mean_label(self) -> str:
        return "mean" if self.d + self.D == 0 else "drift"

    def coeff_labels(self) -> list[str]:
        labels = [f"ar{i + 1}" for i in range(self.p)]
        labels += [f"ma{i + 1}" for i in range(self.q)]
        labels += [f"sar{i + 1}" for i in range(self.P)]
        labels += [f"sma{i + 1}" for i in range(self.Q)]
        if self.include_drift:
            labels.append(self.mean_label)
        return labels

    def describe(self) -> str:
        base = f"ARIMA({self.p},{self.d},{self.q})"
        if self.period > 1 and (self.P or self.D or self.Q):
            base += f"({self.P},{self.D},{self.Q})[{self.period}]"
        if self.include_drift:
            base += f" with {self.mean_label}"
        return base


def _check_roots_outside(coeffs: np.ndarray, label: str) -> None:
    """Require all roots of 1 - c_1 z - ... - c_k z^k strictly outside |z|=1."""
    if coeffs.size == 0:
        return
    poly = np.concatenate([[1.0], -np.asarray(coeffs, float)])
    roots = np.roots(poly[::-1])
    if roots.size and np.min(np.abs(roots)) <= 1.0:
        raise DataError(f"{label} polynomial has a root on or inside the unit circle")


@dataclass(frozen=True)
class SarimaParams:
    """Coefficient values for a SarimaSpec, plus the innovation variance."""

    mu_or_drift: float = 0.0
    phi: np.ndarray = field(default_factory=lambda: np.zeros(0))
    theta: np.ndarray = field(default_factory=lambda: np.zeros(0))
    Phi: np.ndarray = field(default_factory=lambda: np.zeros(0))
    Theta: np.ndarray = field(default_factory=lambda: np.zeros(0))
    sigma2: float = 1.0

    def __post_init__(self):
        for name in ("phi", "theta", "Phi", "Theta"):
            object.__setattr__(self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=float)))

    def validate(self, spec: SarimaSpec) -> None:
        shapes = dict(phi=spec.p, theta=spec.q, Phi=spec.P, Theta=spec.Q)
        for name, want in shapes.items():
            got = getattr(self, name).size
            if got != want:
                raise DataError(f"{name} has {got} coefficients, spec wants {want}")
        if not self.sigma2 > 0.0:
            raise DataError(f"sigma2 must be positive, got {self.sigma2}")
        _check_roots_outside(self.phi, "AR")
        _check_roots_outside(self.Phi, "seasonal AR")
        _check_roots_outside(-self.theta, "MA")
        _check_roots_outside(-self.Theta, "seasonal MA")

    def free_coeffs(self, spec: SarimaSpec) -> np.ndarray:
        """Coefficient vector in reporting order: ar, ma, sar, sma[, mean/drift]."""
        parts = [self.phi, self.theta, self.Phi, self.Theta]
        if spec.include_drift:
            parts.append(np.array([self.mu_or_drift]))
        return np.concatenate(parts) if parts else np.zeros(0)


@dataclass(frozen=True)
class SarimaFit:
    """A maximum-likelihood fit: coefficients, uncertainty and fit quality."""

    spec: SarimaSpec
    params: SarimaParams
    std_errors: np.ndarray | None
    loglik: float
    aic: float
    bic: float
    residuals: np.ndarray
    n_effective: int
    converged: bool
    series: TimeSeries

    def coeff_table(self) -> list[tuple[str, float, float]]:
        """(label, estimate, standard error) rows in reporting order."""
        values = self.params.free_coeffs(self.spec)
        ses = self.std_errors if self.std_errors is not None else np.full(values.size, np.nan)
        return list(zip(self.spec.coeff_labels(), values.tolist(), ses.tolist()))


@dataclass(frozen=True)
class ForecastResult:
    """Point forecasts with symmetric interval bands at several levels."""

    point: np.ndarray
    levels: list[float]
    lower: np.ndarray  # shape (h, n_levels)
    upper: np.ndarray
    sigma_h: np.ndarray


# ---------------------------------------------------------------------------
# partial-autocorrelation reparameterization (stationary/invertible region)


def pacf_to_coeffs(pac: np.ndarray) -> np.ndarray:
    """Durbin-Levinson map from partials in (-1, 1) to stationary AR coefficients."""
    pac = np.asarray(pac, dtype=float)
    coeffs = pac.copy()
    for k in range(1, pac.size):
        coeffs[:k] = coeffs[:k] - pac[k] * coeffs[k - 1::-1].copy()
    return coeffs


def coeffs_to_pacf(coeffs: np.ndarray) -> np.ndarray:
    """Inverse of pacf_to_coeffs; input must be a stationary coefficient vector."""
    cur = np.asarray(coeffs, dtype=float).copy()
    p = cur.size
    pac = np.zeros(p)
    for k in range(p - 1, -1, -1):
        r = cur[k]
        pac[k] = r
        if k > 0:
            denom = 1.0 - r * r
            if denom <= 0.0:
                raise DataError("coefficient vector is not inside the stationary region")
            cur = (cur[:k] + r * cur[k - 1::-1]) / denom
    return pac


def _unconstrained_to_ar(u: np.ndarray) -> np.ndarray:
    return pacf_to_coeffs(np.tanh(u))


def _unconstrained_to_ma(u: np.ndarray) -> np.ndarray:
    return -pacf_to_coeffs(np.tanh(u))


def _ar_to_unconstrained(phi: np.ndarray) -> np.ndarray:
    return np.arctanh(np.clip(coeffs_to_pacf(phi), -1 + 1e-12, 1 - 1e-12))


def _ma_to_unconstrained(theta: np.ndarray) -> np.ndarray:
    return np.arctanh(np.clip(coeffs_to_pacf(-np.asarray(theta, float)), -1 + 1e-12, 1 - 1e-12))


def _split_u(u: np.ndarray, spec: SarimaSpec) -> SarimaParams:
    """Unconstrained optimizer vector -> coefficient values (sigma2 left at 1)."""
    p, q, P, Q = spec.p, spec.q, spec.P, spec.Q
    i = 0
    phi = _unconstrained_to_ar(u[i:i + p]); i += p
    theta = _unconstrained_to_ma(u[i:i + q]); i += q
    Phi = _unconstrained_to_ar(u[i:i + P]); i += P
    Theta = _unconstrained_to_ma(u[i:i + Q]); i += Q
    mu = float(u[i]) if spec.include_drift else 0.0
    return SarimaParams(mu_or_drift=mu, phi=phi, theta=theta, Phi=Phi, Theta=Theta)


def _params_to_u(params: SarimaParams, spec: SarimaSpec) -> np.ndarray:
    parts = [
        _ar_to_unconstrained(params.phi),
        _ma_to_unconstrained(params.theta),
        _ar_to_unconstrained(params.Phi),
        _ma_to_unconstrained(params.Theta),
    ]
    if spec.include_drift:
        parts.append(np.array([params.mu_or_drift]))
    return np.concatenate(parts) if parts else np.zeros(0)


# ---------------------------------------------------------------------------
# polynomial expansion


def expand_polynomials(params: SarimaParams, spec: SarimaSpec) -> tuple[np.ndarray, np.ndarray]:
    """Multiply seasonal and non-seasonal polynomials into flat (phi, theta) vectors."""
    m = spec.period
    ar = np.concatenate([[1.0], -params.phi]) if spec.p else np.array([1.0])
    sar = np.zeros(spec.P * m + 1)
    sar[0] = 1.0
    for i in range(spec.P):
        sar[(i + 1) * m] = -params.Phi[i]
    ma = np.concatenate([[1.0], params.theta]) if spec.q else np.array([1.0])
    sma = np.zeros(spec.Q * m + 1)
    sma[0] = 1.0
    for i in range(spec.Q):
        sma[(i + 1) * m] = params.Theta[i]
    full_ar = np.convolve(ar, sar)
    full_ma = np.convolve(ma, sma)
    return -full_ar[1:], full_ma[1:]


def _difference_polynomial(spec: SarimaSpec) -> np.ndarray:
    """(1-B)^d (1-B^m)^D as a coefficient array in B."""
    poly = np.array([1.0])
    for _ in range(spec.d):
        poly = np.convolve(poly, [1.0, -1.0])
    seasonal = np.zeros(spec.period + 1)
    seasonal[0], seasonal[-1] = 1.0, -1.0
    for _ in range(spec.D):
        poly = np.convolve(poly, seasonal)
    return poly


def psi_weights(fit_spec: SarimaSpec, params: SarimaParams, h: int) -> np.ndarray:
    """MA(infinity) weights of the model on the original (undifferenced) scale."""
    phi_full, theta_full = expand_polynomials(params, fit_spec)
    ar_poly = np.convolve(
        np.concatenate([[1.0], -phi_full]), _difference_polynomial(fit_spec)
    )
    a = -ar_poly[1:]
    b = theta_full
    psi = np.zeros(h)
    psi[0] = 1.0
    for j in range(1, h):
        val = b[j - 1] if j - 1 < b.size else 0.0
        upto = min(j, a.size)
        for i in range(1, upto + 1):
            val += a[i - 1] * psi[j - i]
        psi[j] = val
    return psi


# ---------------------------------------------------------------------------
# likelihood


def _filter_differenced(z: np.ndarray, params: SarimaParams, spec: SarimaSpec):
    phi_full, theta_full = expand_polynomials(params, spec)
    return kalman_filter(np.ascontiguousarray(z, dtype=float), phi_full, theta_full)


def _gaussian_loglik(v: np.ndarray, F: np.ndarray, sigma2: float) -> float:
    n = v.size
    return -0.5 * float(
        n * _LOG_2PI + n * math.log(sigma2) + np.log(F).sum() + (v * v / F).sum() / sigma2
    )


def loglik(spec: SarimaSpec, params: SarimaParams, series: TimeSeries) -> float:
    """Exact Gaussian log-likelihood of the differenced series under the model."""
    params.validate(spec)
    w = difference(series, spec.diff_spec)
    z = w - params.mu_or_drift
    v, F, _, ok = _filter_differenced(z, params, spec)
    if not ok:
        raise FloatingPointError("Kalman recursion produced a non-finite state")
    value = _gaussian_loglik(v, F, params.sigma2)
    if not math.isfinite(value):
        raise FloatingPointError("log-likelihood is not finite at these parameters")
    return value


def information_criteria(loglik_value: float, k: int, n: int) -> tuple[float, float]:
    """AIC and BIC for a model with k parameters fitted to n observations."""
    if k < 1:
        raise DataError(f"parameter count k must be >= 1, got {k}")
    if n < 1:
        raise DataError(f"sample size n must be >= 1, got {n}")
    aic = -2.0 * loglik_value + 2.0 * k
    bic = -2.0 * loglik_value + k * math.log(n)
    return aic, bic


# ---------------------------------------------------------------------------
# fitting


def _concentrated_nll(u: np.ndarray, z_base: np.ndarray, spec: SarimaSpec) -> float:
    """Negative profile log-likelihood (sigma2 concentrated out)."""
    params = _split_u(u, spec)
    z = z_base - params.mu_or_drift
    v, F, _, ok = kalman_filter(z, *expand_polynomials(params, spec))
    if not ok:
        return _PENALTY
    n = z.size
    sigma2 = max(float(np.mean(v * v / F)), _SIGMA2_FLOOR)
    val = 0.5 * (n * math.log(sigma2) + float(np.log(F).sum()))
    return val if math.isfinite(val) else _PENALTY


def _css_objective(u: np.ndarray, z_base: np.ndarray, spec: SarimaSpec) -> float:
    params = _split_u(u, spec)
    z = np.ascontiguousarray(z_base - params.mu_or_drift)
    e = css_residuals(z, *expand_polynomials(params, spec))
    sse = float(e @ e)
    if not math.isfinite(sse):
        return _PENALTY
    return 0.5 * z.size * math.log(max(sse / z.size, _SIGMA2_FLOOR))


def _full_nll_extended(u_ext: np.ndarray, z_base: np.ndarray, spec: SarimaSpec) -> float:
    """Negative log-likelihood in (unconstrained coefficients, log sigma2)."""
    params = _split_u(u_ext[:-1], spec)
    sigma2 = math.exp(u_ext[-1])
    z = z_base - params.mu_or_drift
    v, F, _, ok = kalman_filter(z, *expand_polynomials(params, spec))
    if not ok:
        return _PENALTY
    val = -_gaussian_loglik(v, F, sigma2)
    return val if math.isfinite(val) else _PENALTY


def _numeric_hessian(f, x: np.ndarray) -> np.ndarray:
    d = x.size
    h = 1e-4 * (1.0 + np.abs(x))
    hess = np.empty((d, d))
    f0 = f(x)
    for i in range(d):
        ei = np.zeros(d)
        ei[i] = h[i]
        fpp = f(x + ei)
        fmm = f(x - ei)
        hess[i, i] = (fpp - 2.0 * f0 + fmm) / (h[i] ** 2)
        for j in range(i + 1, d):
            ej = np.zeros(d)
            ej[j] = h[j]
            val = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (
                4.0 * h[i] * h[j]
            )
            hess[i, j] = hess[j, i] = val
    return hess


def _numeric_jacobian(g, x: np.ndarray, out_dim: int) -> np.ndarray:
    d = x.size
    h = 1e-6 * (1.0 + np.abs(x))
    jac = np.empty((out_dim, d))
    for j in range(d):
        ej = np.zeros(d)
        ej[j] = h[j]
        jac[:, j] = (g(x + ej) - g(x - ej)) / (2.0 * h[j])
    return jac


def _std_errors(u_hat: np.ndarray, sigma2_hat: float, z: np.ndarray, spec: SarimaSpec) -> np.ndarray:
    k_free = spec.n_coeffs
    u_ext = np.concatenate([u_hat, [math.log(sigma2_hat)]])
    hess = _numeric_hessian(lambda ue: _full_nll_extended(ue, z, spec), u_ext)
    try:
        cov_u = np.linalg.inv(hess)
    except np.linalg.LinAlgError:
        cov_u = np.linalg.pinv(hess)

    def reported(ue: np.ndarray) -> np.ndarray:
        return _split_u(ue[:-1], spec).free_coeffs(spec)

    jac = _numeric_jacobian(reported, u_ext, k_free)
    cov_rep = jac @ cov_u @ jac.T
    diag = np.diag(cov_rep).copy()
    out = np.full(k_free, np.nan)
    positive = diag > 0
    out[positive] = np.sqrt(diag[positive])
    return out


def _fit_white_noise(spec: SarimaSpec, series: TimeSeries, w: np.ndarray) -> SarimaFit:
    """Analytic MLE for models with no ARMA coefficients."""
    mu = float(w.mean()) if spec.include_drift else 0.0
    resid = w - mu
    n = w.size
    sigma2 = max(float(np.mean(resid * resid)), _SIGMA2_FLOOR)
    ll = -0.5 * n * (_LOG_2PI + math.log(sigma2) + np.mean(resid * resid) / sigma2)
    k = spec.n_coeffs + 1
    aic, bic = information_criteria(ll, k, n)
    std_errors = np.array([math.sqrt(sigma2 / n)]) if spec.include_drift else np.zeros(0)
    params = SarimaParams(mu_or_drift=mu, sigma2=sigma2)
    return SarimaFit(
        spec=spec, params=params, std_errors=std_errors, loglik=ll, aic=aic, bic=bic,
        residuals=resid, n_effective=n, converged=True, series=series,
    )


def fit(
    spec: SarimaSpec,
    series: TimeSeries,
    *,
    seed: int = 0,
    max_eval: int = 5000,
    compute_std_errors: bool = True,
) -> SarimaFit:
    """Maximize the exact likelihood; deterministic for fixed inputs and seed.

    Non-convergence is reported through `converged=False` on the best point
    found, never by silently weakening tolerances.
    """
    if not isinstance(series, TimeSeries):
        series = TimeSeries(np.asarray(series, dtype=float), period=spec.period)
    w = difference(series, spec.diff_spec)
    n_eff = w.size
    k = spec.n_coeffs + 1
    if n_eff < k + 10:
        raise DataError(
            f"{n_eff} effective observations are too few to fit {spec.describe()} "
            f"(needs at least {k + 10})"
        )

    if spec.p + spec.q + spec.P + spec.Q == 0:
        return _fit_white_noise(spec, series, w)

    z_base = np.ascontiguousarray(w, dtype=float)
    u0 = np.zeros(spec.n_coeffs)
    if spec.include_drift:
        u0[-1] = float(w.mean())

    css = minimize(
        lambda u: _css_objective(u, z_base, spec),
        u0, step=0.25, max_eval=min(800, max_eval), restarts=0, seed=seed,
    )
    result = minimize(
        lambda u: _concentrated_nll(u, z_base, spec),
        css.x, step=0.1, max_eval=max_eval, restarts=3, seed=seed,
    )

    params0 = _split_u(result.x, spec)
    z = z_base - params0.mu_or_drift
    v, F, _, ok = kalman_filter(z, *expand_polynomials(params0, spec))
    if not ok:
        raise ConvergenceError(f"likelihood evaluation failed at the optimum of {spec.describe()}")
    sigma2 = max(float(np.mean(v * v / F)), _SIGMA2_FLOOR)
    params = SarimaParams(
        mu_or_drift=params0.mu_or_drift, phi=params0.phi, theta=params0.theta,
        Phi=params0.Phi, Theta=params0.Theta, sigma2=sigma2,
    )
    ll = _gaussian_loglik(v, F, sigma2)
    aic, bic = information_criteria(ll, k, n_eff)
    std_errors = _std_errors(result.x, sigma2, z_base, spec) if compute_std_errors else None
    return SarimaFit(
        spec=spec, params=params, std_errors=std_errors, loglik=ll, aic=aic, bic=bic,
        residuals=v, n_effective=n_eff, converged=result.converged, series=series,
    )


# ---------------------------------------------------------------------------
# forecasting and simulation


def _propagate_state(a: np.ndarray, phi_full: np.ndarray, steps: int) -> np.ndarray:
    """First state component over `steps` applications of the transition."""
    r = a.size
    tphi = np.zeros(r)
    tphi[: phi_full.size] = phi_full
    out = np.empty(steps)
    state = a.copy()
    for s in range(steps):
        out[s] = state[0]
        a0 = state[0]
        nxt = tphi * a0
        nxt[:-1] += state[1:]
        state = nxt
    return out


def forecast(fit_result: SarimaFit, h: int, levels: list[float]) -> ForecastResult:
    """Point forecasts on the original scale with symmetric interval bands.

    Step-h forecast standard error accumulates the squared psi-weights of the
    full model including its differencing operators.
    """
    if h < 1:
        raise DataError(f"forecast horizon must be >= 1, got {h}")
    levels = list(levels)
    if not levels:
        raise DataError("at least one confidence level is required")
    if any(not 0.0 < lv < 1.0 for lv in levels):
        raise DataError("confidence levels must lie strictly inside (0, 1)")

    spec, params = fit_result.spec, fit_result.params
    w = difference(fit_result.series, spec.diff_spec)
    z = w - params.mu_or_drift
    phi_full, theta_full = expand_polynomials(params, spec)
    v, F, a_next, ok = kalman_filter(np.ascontiguousarray(z, float), phi_full, theta_full)
    if not ok:
        raise FloatingPointError("Kalman recursion failed at the fitted parameters")

    w_future = params.mu_or_drift + _propagate_state(a_next, phi_full, h)
    point = extend_series(fit_result.series.values, w_future, spec.diff_spec)

    psi = psi_weights(spec, params, h)
    sigma_h = np.sqrt(params.sigma2 * np.cumsum(psi * psi))

    z_scores = np.array([norm.ppf(0.5 + lv / 2.0) for lv in levels])
    lower = point[:, None] - sigma_h[:, None] * z_scores[None, :]
    upper = point[:, None] + sigma_h[:, None] * z_scores[None, :]
    return ForecastResult(point=point, levels=levels, lower=lower, upper=upper, sigma_h=sigma_h)


def simulate(spec: SarimaSpec, params: SarimaParams, n: int, seed: int) -> TimeSeries:
    """Draw a deterministic realization of the model from a seeded generator.

    The ARMA recursion discards a burn-in of max(200, 10*(p+q+m*(P+Q)))
    steps; inverse differencing then maps to the original scale.
    """
    if n < 1:
        raise DataError(f"simulation length must be >= 1, got {n}")
    params.validate(spec)
    m = spec.period
    burn = max(200, 10 * (spec.p + spec.q + m * (spec.P + spec.Q)))
    rng = np.random.default_rng(seed)
    e = rng.standard_normal(burn + n) * math.sqrt(params.sigma2)
    phi_full, theta_full = expand_polynomials(params, spec)
    w = arma_recursion(e, phi_full, theta_full)[burn:] + params.mu_or_drift
    head = spec.diff_spec.head_length
    if head:
        from .series import undifference

        values = undifference(w, spec.diff_spec, np.zeros(head))[head:]
    else:
        values = w
    return TimeSeries(values, period=m)
