"""Seasonal ARIMA forecasting of weekly admissions with diagnostics and baselines."""

__version__ = "0.1.0"

from .baselines import (
    BaselineForecast,
    drift_forecast,
    holt_forecast,
    mean_forecast,
    naive_forecast,
    seasonal_naive_forecast,
    ses_forecast,
)
from .dataio import RunReport, emit_report, load_csv, split
from .diagnostics import (
    PValueBound,
    TestResult,
    UnitRootHypothesis,
    adf_test,
    kpss_test,
    ljung_box,
    normality_battery,
    pp_test,
)
from .errors import ConvergenceError, DataError, ZeroVarianceError
from .sarima import (
    ForecastResult,
    SarimaFit,
    SarimaParams,
    SarimaSpec,
    fit,
    forecast,
    information_criteria,
    loglik,
    simulate,
)
from .selection import (
    CandidateScore,
    ComparisonReport,
    SearchBounds,
    compare_methods,
    holdout_errors,
    select_sarima,
)
from .series import (
    CorrelogramResult,
    DifferenceSpec,
    TimeSeries,
    acf,
    difference,
    pacf,
    seasonal_table,
    undifference,
)

__all__ = [name for name in dir() if not name.startswith("_")]
