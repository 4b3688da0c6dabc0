"""Candidate-grid SARIMA selection and the seven-method holdout comparison.

Differencing orders are fixed up front by repeated KPSS testing (seasonal
first, then non-seasonal), so every candidate is scored on the same
effective sample.  The stepwise strategy hill-climbs from a small start set
by +/-1 moves on each order plus a drift toggle; the exhaustive strategy is
guarded against combinatorially absurd grids.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .baselines import BASELINE_METHODS
from .diagnostics import UnitRootHypothesis, kpss_test
from .errors import ConvergenceError, DataError, ZeroVarianceError
from .sarima import SarimaFit, SarimaSpec, fit, forecast
from .series import TimeSeries, difference, DifferenceSpec

__all__ = [
    "SearchBounds",
    "CandidateScore",
    "MethodScore",
    "ComparisonReport",
    "choose_differencing",
    "select_sarima",
    "holdout_errors",
    "compare_methods",
]

_EXHAUSTIVE_GUARD = 5000
_SEARCH_MAX_EVAL = 2000


@dataclass(frozen=True)
class SearchBounds:
    """Order bounds for the candidate grid; defaults mirror the paper-scale run."""

    max_p: int = 24
    max_q: int = 24
    max_d: int = 4
    max_P: int = 1
    max_Q: int = 1
    max_D: int = 1
    period: int = 1
    try_drift: bool = True

    def __post_init__(self):
        for name in ("max_p", "max_q", "max_d", "max_P", "max_Q", "max_D"):
            if getattr(self, name) < 0:
                raise DataError(f"{name} must be nonnegative")
        if self.period < 1:
            raise DataError(f"period must be >= 1, got {self.period}")


@dataclass(frozen=True)
class CandidateScore:
    spec: SarimaSpec
    aic: float
    bic: float
    converged: bool

    def criterion(self, name: str) -> float:
        value = self.aic if name == "aic" else self.bic
        return value if math.isfinite(value) else math.inf


@dataclass(frozen=True)
class MethodScore:
    method: str
    sum_of_error: float
    mae: float
    rmse: float


@dataclass(frozen=True)
class ComparisonReport:
    rows: list[MethodScore]
    winner: str
    arima_description: str = ""
    failed_methods: dict = field(default_factory=dict)


def _kpss_rejects(values: np.ndarray) -> bool:
    try:
        return kpss_test(values, UnitRootHypothesis.CONSTANT).rejected_at_05
    except ZeroVarianceError:
        return False  # a constant series is trivially stationary


def choose_differencing(series: TimeSeries, bounds: SearchBounds) -> tuple[int, int]:
    """Difference until KPSS stops rejecting stationarity, seasonal order first."""
    values = series.values
    D = 0
    if bounds.period > 1:
        while (
            D < bounds.max_D
            and values.size > bounds.period + 10
            and _kpss_rejects(values)
        ):
            values = values[bounds.period:] - values[:-bounds.period]
            D += 1
    d = 0
    while d < bounds.max_d and values.size > 10 and _kpss_rejects(values):
        values = np.diff(values)
        d += 1
    return d, D


def _spec_order_key(spec: SarimaSpec) -> tuple:
    return (spec.p, spec.d, spec.q, spec.P, spec.D, spec.Q, spec.include_drift)


def _evaluate(spec: SarimaSpec, series: TimeSeries, seed: int) -> CandidateScore:
    try:
        result = fit(spec, series, seed=seed, max_eval=_SEARCH_MAX_EVAL,
                     compute_std_errors=False)
    except (DataError, ConvergenceError, FloatingPointError):
        return CandidateScore(spec=spec, aic=math.nan, bic=math.nan, converged=False)
    return CandidateScore(spec=spec, aic=result.aic, bic=result.bic,
                          converged=result.converged)


def _rank(scores: list[CandidateScore], criterion: str) -> list[CandidateScore]:
    return sorted(
        scores,
        key=lambda s: (
            not s.converged,
            s.criterion(criterion),
            s.spec.n_coeffs,
            _spec_order_key(s.spec),
        ),
    )


def _neighbors(spec: SarimaSpec, bounds: SearchBounds, drift_allowed: bool) -> list[SarimaSpec]:
    out = []
    moves = [("p", -1), ("p", +1), ("q", -1), ("q", +1)]
    if bounds.period > 1:
        moves += [("P", -1), ("P", +1), ("Q", -1), ("Q", +1)]
    caps = dict(p=bounds.max_p, q=bounds.max_q, P=bounds.max_P, Q=bounds.max_Q)
    for name, delta in moves:
        value = getattr(spec, name) + delta
        if 0 <= value <= caps[name]:
            kwargs = dict(p=spec.p, d=spec.d, q=spec.q, P=spec.P, D=spec.D, Q=spec.Q,
                          period=spec.period, include_drift=spec.include_drift)
            kwargs[name] = value
            out.append(SarimaSpec(**kwargs))
    if drift_allowed:
        out.append(SarimaSpec(p=spec.p, d=spec.d, q=spec.q, P=spec.P, D=spec.D, Q=spec.Q,
                              period=spec.period, include_drift=not spec.include_drift))
    return out


def select_sarima(
    train: TimeSeries,
    bounds: SearchBounds | None = None,
    criterion: str = "aic",
    strategy: str = "stepwise",
    *,
    seed: int = 0,
    parallel: bool | int = False,
    force: bool = False,
) -> list[CandidateScore]:
    """Rank candidate models by AIC/BIC; deterministic under parallel evaluation.

    `stepwise` hill-climbs and is the default; `exhaustive` fits the whole
    grid and refuses more than 5000 candidates unless `force` is set.
    """
    if criterion not in ("aic", "bic"):
        raise DataError(f"criterion must be 'aic' or 'bic', got {criterion!r}")
    if strategy not in ("stepwise", "exhaustive"):
        raise DataError(f"strategy must be 'stepwise' or 'exhaustive', got {strategy!r}")
    if bounds is None:
        bounds = SearchBounds(period=train.period)
    d, D = choose_differencing(train, bounds)
    drift_allowed = bounds.try_drift and d + D <= 1

    scored: dict[tuple, CandidateScore] = {}

    def evaluate_all(specs: list[SarimaSpec]) -> None:
        todo = [s for s in specs if _spec_order_key(s) not in scored]
        todo = sorted(set(todo), key=_spec_order_key)
        if not todo:
            return
        if parallel:
            workers = parallel if isinstance(parallel, int) and parallel > 1 else 4
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda s: _evaluate(s, train, seed), todo))
        else:
            results = [_evaluate(s, train, seed) for s in todo]
        for score in results:
            scored[_spec_order_key(score.spec)] = score

    def build(p, q, P, Q, drift) -> SarimaSpec | None:
        try:
            return SarimaSpec(p=p, d=d, q=q, P=P, D=D, Q=Q,
                              period=bounds.period, include_drift=drift)
        except DataError:
            return None

    if strategy == "exhaustive":
        drift_options = (False, True) if drift_allowed else (False,)
        count = ((bounds.max_p + 1) * (bounds.max_q + 1) * (bounds.max_P + 1)
                 * (bounds.max_Q + 1) * len(drift_options))
        if count > _EXHAUSTIVE_GUARD and not force:
            raise DataError(
                f"exhaustive search over {count} candidates exceeds the "
                f"{_EXHAUSTIVE_GUARD} guard; pass force=True to insist"
            )
        grid = []
        for p in range(bounds.max_p + 1):
            for q in range(bounds.max_q + 1):
                seasonal_P = range(bounds.max_P + 1) if bounds.period > 1 else (0,)
                seasonal_Q = range(bounds.max_Q + 1) if bounds.period > 1 else (0,)
                for P in seasonal_P:
                    for Q in seasonal_Q:
                        for drift in drift_options:
                            spec = build(p, q, P, Q, drift)
                            if spec is not None:
                                grid.append(spec)
        evaluate_all(grid)
    else:
        starts = []
        seasonal_starts = [(0, 0), (1, 1)] if bounds.period > 1 else [(0, 0)]
        for p, q in ((0, 0), (1, 1), (2, 2)):
            for P, Q in seasonal_starts:
                spec = build(min(p, bounds.max_p), min(q, bounds.max_q),
                             min(P, bounds.max_P), min(Q, bounds.max_Q), drift_allowed)
                if spec is not None:
                    starts.append(spec)
        evaluate_all(starts)
        if not scored:
            raise ConvergenceError("no starting candidate could be evaluated")
        current = _rank(list(scored.values()), criterion)[0]
        while True:
            evaluate_all(_neighbors(current.spec, bounds, drift_allowed))
            best = _rank(list(scored.values()), criterion)[0]
            if _spec_order_key(best.spec) == _spec_order_key(current.spec):
                break
            current = best

    ranked = _rank(list(scored.values()), criterion)
    if not ranked or not ranked[0].converged:
        raise ConvergenceError("no candidate model converged")
    return ranked


def holdout_errors(actual, predicted) -> tuple[float, float, float]:
    """(sum of absolute errors, mean absolute error, root mean squared error)."""
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.size != p.size:
        raise DataError(f"length mismatch: {a.size} actual vs {p.size} predicted")
    if a.size < 1:
        raise DataError("holdout comparison needs at least one observation")
    err = a - p
    sum_abs = float(np.abs(err).sum())
    mae = sum_abs / a.size
    rmse = math.sqrt(float(err @ err) / a.size)
    return sum_abs, mae, rmse


def compare_methods(
    train: TimeSeries,
    test,
    *,
    arima_fit: SarimaFit | None = None,
    bounds: SearchBounds | None = None,
    criterion: str = "aic",
    seed: int = 0,
    parallel: bool | int = False,
) -> ComparisonReport:
    """Score the stepwise-selected SARIMA against the six baselines on a holdout.

    Rows are sorted ascending by sum of absolute errors (method name breaks
    ties); the winner is the first row.
    """
    test_values = np.asarray(test, dtype=float)
    if test_values.size < 1:
        raise DataError("holdout segment is empty")
    h = test_values.size

    rows = []
    failed: dict[str, str] = {}
    if arima_fit is None:
        ranked = select_sarima(train, bounds, criterion, "stepwise",
                               seed=seed, parallel=parallel)
        arima_fit = fit(ranked[0].spec, train, seed=seed)
    arima_points = forecast(arima_fit, h, [0.95]).point
    rows.append(MethodScore("arima", *holdout_errors(test_values, arima_points)))

    for name, method in BASELINE_METHODS.items():
        try:
            points = method(train, h).point
        except DataError as exc:
            failed[name] = str(exc)
            continue
        rows.append(MethodScore(name, *holdout_errors(test_values, points)))

    rows.sort(key=lambda r: (r.sum_of_error, r.method))
    return ComparisonReport(
        rows=rows,
        winner=rows[0].method,
        arima_description=arima_fit.spec.describe(),
        failed_methods=failed,
    )
