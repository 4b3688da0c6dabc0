"""End-to-end orchestration: diagnostics, selection, comparison, forecast.

This is the programmatic equivalent of the `report` CLI subcommand and the
single place that fixes the pipeline's documented defaults: a 200-week
training split, stepwise AIC selection, residual whiteness at m = 2*period
lags, and a 52-week forecast with levels 10%..90% plus 99%.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import __version__
from .dataio import RunReport, split
from .diagnostics import (
    TestResult,
    UnitRootHypothesis,
    adf_test,
    kpss_test,
    ljung_box,
    normality_battery,
    pp_test,
)
from .errors import DataError
from .sarima import ForecastResult, SarimaFit, SarimaSpec, fit, forecast
from .selection import SearchBounds, compare_methods, select_sarima
from .series import TimeSeries

__all__ = [
    "DEFAULT_LEVELS",
    "PipelineResult",
    "series_diagnostics",
    "residual_diagnostics",
    "test_result_dict",
    "model_summary",
    "forecast_summary",
    "run_pipeline",
]

DEFAULT_LEVELS = [0.10, 0.20, 0.30, 0.40, 0.50, 0.60, 0.70, 0.80, 0.90, 0.99]
DEFAULT_TRAIN_LEN = 200
DEFAULT_HORIZON = 52


@dataclass(frozen=True)
class PipelineResult:
    report: RunReport
    train_fit: SarimaFit
    full_fit: SarimaFit
    forecast: ForecastResult
    series: TimeSeries


def series_diagnostics(values) -> list[TestResult]:
    """Unit-root battery: ADF and PP against a trend, KPSS against a level."""
    return [
        adf_test(values, UnitRootHypothesis.CONSTANT_AND_TREND),
        pp_test(values, UnitRootHypothesis.CONSTANT_AND_TREND),
        kpss_test(values, UnitRootHypothesis.CONSTANT),
    ]


def residual_diagnostics(fit_result: SarimaFit) -> list[TestResult]:
    """Ljung-Box whiteness plus the six-test normality battery on residuals."""
    spec = fit_result.spec
    residuals = fit_result.residuals
    fitdf = spec.p + spec.q + spec.P + spec.Q
    m = min(2 * spec.period, residuals.size - 1)
    m = max(m, fitdf + 1)
    if m + 1 > residuals.size:
        raise DataError("too few residuals for the whiteness test")
    results = [ljung_box(residuals, m, fitdf)]
    results.extend(normality_battery(residuals))
    return results


def test_result_dict(result: TestResult) -> dict:
    return {
        "test": result.test_name,
        "statistic": result.statistic,
        "p_value": result.p_value,
        "p_value_kind": result.p_value_kind,
        "null_hypothesis": result.null_hypothesis,
        "rejected_at_05": result.rejected_at_05,
    }


def model_summary(fit_result: SarimaFit) -> dict:
    spec = fit_result.spec
    return {
        "description": spec.describe(),
        "order": {"p": spec.p, "d": spec.d, "q": spec.q},
        "seasonal_order": {"P": spec.P, "D": spec.D, "Q": spec.Q, "period": spec.period},
        "include_drift": spec.include_drift,
        "coefficients": [
            {"name": name, "value": value, "std_error": se}
            for name, value, se in fit_result.coeff_table()
        ],
        "sigma2": fit_result.params.sigma2,
        "loglik": fit_result.loglik,
        "aic": fit_result.aic,
        "bic": fit_result.bic,
        "n_effective": fit_result.n_effective,
        "converged": fit_result.converged,
    }


def forecast_summary(result: ForecastResult) -> dict:
    return {
        "horizon": int(result.point.size),
        "levels": list(result.levels),
        "point": result.point,
        "sigma_h": result.sigma_h,
        "lower": result.lower,
        "upper": result.upper,
    }


def run_pipeline(
    series: TimeSeries,
    *,
    train_len: int = DEFAULT_TRAIN_LEN,
    horizon: int = DEFAULT_HORIZON,
    levels: list[float] | None = None,
    criterion: str = "aic",
    seed: int = 0,
    parallel: bool | int = False,
    input_sha256: str = "",
) -> PipelineResult:
    """Reproduce the full analysis on one series and assemble the RunReport.

    Diagnostics and the model section come from the training segment; the
    published forecast refits the selected specification on the full series
    and extends `horizon` steps beyond it.
    """
    levels = list(levels) if levels else list(DEFAULT_LEVELS)
    train, test = split(series, train_len)

    ranked = select_sarima(train, SearchBounds(period=series.period), criterion,
                           "stepwise", seed=seed, parallel=parallel)
    train_fit = fit(ranked[0].spec, train, seed=seed)

    comparison = compare_methods(train, test.values, arima_fit=train_fit, seed=seed)

    selected = SarimaSpec(
        p=train_fit.spec.p, d=train_fit.spec.d, q=train_fit.spec.q,
        P=train_fit.spec.P, D=train_fit.spec.D, Q=train_fit.spec.Q,
        period=train_fit.spec.period, include_drift=train_fit.spec.include_drift,
    )
    full_fit = fit(selected, series, seed=seed)
    fc = forecast(full_fit, horizon, levels)

    report = RunReport(
        diagnostics={
            "series": [test_result_dict(t) for t in series_diagnostics(train.values)],
            "residuals": [test_result_dict(t) for t in residual_diagnostics(train_fit)],
        },
        comparison={
            "rows": [
                {"method": r.method, "sum_of_error": r.sum_of_error,
                 "mae": r.mae, "rmse": r.rmse}
                for r in comparison.rows
            ],
            "winner": comparison.winner,
            "arima_description": comparison.arima_description,
            "failed_methods": comparison.failed_methods,
        },
        model=model_summary(train_fit),
        forecast=forecast_summary(fc),
        provenance={
            "input_sha256": input_sha256,
            "seed": seed,
            "version": __version__,
        },
    )
    return PipelineResult(report=report, train_fit=train_fit, full_fit=full_fit,
                          forecast=fc, series=series)
