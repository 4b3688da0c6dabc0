"""Command-line surface tying the whole pipeline together.

Subcommands: diagnose, fit, autofit, compare, forecast, report.
Exit codes: 0 success, 1 usage error, 2 data error, 3 convergence failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .charts import emit_fan_chart, emit_seasonal_plot
from .dataio import (
    RunReport,
    _round6,
    emit_report,
    load_csv,
    sha256_of_file,
    split,
)
from .errors import ConvergenceError, DataError
from .pipeline import (
    DEFAULT_HORIZON,
    DEFAULT_LEVELS,
    DEFAULT_TRAIN_LEN,
    model_summary,
    residual_diagnostics,
    run_pipeline,
    series_diagnostics,
    test_result_dict,
)
from .sarima import SarimaSpec, fit as fit_model, forecast as forecast_model
from .selection import SearchBounds, compare_methods, select_sarima


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _parse_triplet(text: str, flag: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise DataError(f"{flag} expects three comma-separated integers, got {text!r}")
    try:
        vals = tuple(int(p) for p in parts)
    except ValueError:
        raise DataError(f"{flag} expects integers, got {text!r}") from None
    return vals  # type: ignore[return-value]


def _parse_levels(text: str) -> list[float]:
    levels = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            value = float(part)
        except ValueError:
            raise DataError(f"invalid confidence level {part!r}") from None
        if value >= 1.0:
            value /= 100.0
        if not 0.0 < value < 1.0:
            raise DataError(f"confidence level {part!r} outside (0, 100)")
        levels.append(value)
    if not levels:
        raise DataError("at least one confidence level is required")
    return levels


def _print_or_write(doc: dict, out) -> None:
    payload = json.dumps(_round6(doc), sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)


def _spec_from_args(args, period: int) -> SarimaSpec:
    p, d, q = _parse_triplet(args.order, "--order")
    P, D, Q = _parse_triplet(args.seasonal, "--seasonal") if args.seasonal else (0, 0, 0)
    return SarimaSpec(p=p, d=d, q=q, P=P, D=D, Q=Q, period=period,
                      include_drift=args.drift)


def _bounds_from_args(args, period: int) -> SearchBounds:
    return SearchBounds(
        max_p=args.max_p, max_q=args.max_q, max_d=args.max_d,
        max_P=args.max_P, max_Q=args.max_Q, max_D=args.max_D,
        period=period, try_drift=not args.no_drift,
    )


def _load(args):
    return load_csv(args.csv, period=args.period,
                    date_column=args.date_column, value_column=args.value_column)


def _cmd_diagnose(args) -> int:
    series = _load(args)
    doc = {"series": [test_result_dict(t) for t in series_diagnostics(series.values)]}
    if args.order:
        model = fit_model(_spec_from_args(args, series.period), series, seed=args.seed)
        doc["residuals"] = [test_result_dict(t) for t in residual_diagnostics(model)]
    else:
        from .diagnostics import ljung_box, normality_battery

        m = min(2 * series.period, len(series) - 1)
        doc["residuals"] = [test_result_dict(ljung_box(series.values, m))]
        doc["residuals"] += [test_result_dict(t) for t in normality_battery(series.values)]
    _print_or_write(doc, args.output)
    return 0


def _cmd_fit(args) -> int:
    series = _load(args)
    model = fit_model(_spec_from_args(args, series.period), series, seed=args.seed)
    _print_or_write(model_summary(model), args.output)
    return 0


def _cmd_autofit(args) -> int:
    series = _load(args)
    ranked = select_sarima(series, _bounds_from_args(args, series.period),
                           args.criterion, args.strategy, seed=args.seed,
                           parallel=args.parallel, force=args.force)
    best = fit_model(ranked[0].spec, series, seed=args.seed)
    doc = {
        "best": model_summary(best),
        "ranked": [
            {
                "description": score.spec.describe(),
                "aic": score.aic, "bic": score.bic, "converged": score.converged,
            }
            for score in ranked[:20]
        ],
    }
    _print_or_write(doc, args.output)
    return 0


def _cmd_compare(args) -> int:
    series = _load(args)
    train, test = split(series, args.train_len)
    report = compare_methods(train, test.values, seed=args.seed, parallel=args.parallel)
    doc = {
        "rows": [
            {"method": r.method, "sum_of_error": r.sum_of_error, "mae": r.mae, "rmse": r.rmse}
            for r in report.rows
        ],
        "winner": report.winner,
        "arima_description": report.arima_description,
        "failed_methods": report.failed_methods,
    }
    _print_or_write(doc, args.output)
    return 0


def _cmd_forecast(args) -> int:
    series = _load(args)
    levels = _parse_levels(args.levels)
    if args.order:
        spec = _spec_from_args(args, series.period)
    else:
        ranked = select_sarima(series, SearchBounds(period=series.period),
                               "aic", "stepwise", seed=args.seed, parallel=args.parallel)
        spec = ranked[0].spec
    model = fit_model(spec, series, seed=args.seed)
    result = forecast_model(model, args.horizon, levels)
    doc = {
        "model": model_summary(model),
        "horizon": args.horizon,
        "levels": levels,
        "point": result.point,
        "sigma_h": result.sigma_h,
        "lower": result.lower,
        "upper": result.upper,
    }
    if args.svg:
        svg_path, csv_path = emit_fan_chart(series, result, args.svg)
        doc["svg"] = str(svg_path)
        doc["bands_csv"] = str(csv_path)
    _print_or_write(doc, args.output)
    return 0


def _cmd_report(args) -> int:
    series = _load(args)
    result = run_pipeline(
        series,
        train_len=args.train_len,
        horizon=args.horizon,
        levels=_parse_levels(args.levels),
        criterion=args.criterion,
        seed=args.seed,
        parallel=args.parallel,
        input_sha256=sha256_of_file(args.csv),
    )
    if args.output:
        emit_report(result.report, args.format, args.output)
    else:
        _print_or_write(result.report.to_dict(), None)
    if args.charts_dir:
        charts = Path(args.charts_dir)
        if not charts.exists():
            raise DataError(f"charts directory does not exist: {charts}")
        emit_seasonal_plot(result.series, charts / "seasonal_plot.svg")
        emit_fan_chart(result.series, result.forecast, charts / "fan_chart.svg")
    return 0


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--period", type=int, default=52,
                        help="seasonal cycle length in observations (default 52)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for optimizer restarts (default 0)")
    common.add_argument("--format", choices=("json", "csv"), default="json",
                        help="report serialization format")
    common.add_argument("--date-column", default="week_start_date",
                        help="name of the date column in the input CSV")
    common.add_argument("--value-column", default="admissions",
                        help="name of the count column in the input CSV")
    common.add_argument("--parallel", type=int, default=0,
                        help="worker threads for candidate search (0 = sequential)")
    common.add_argument("-o", "--output", default=None, help="write output to this path")

    parser = _Parser(prog="admitcast",
                     description="Seasonal ARIMA forecasting of weekly admissions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diagnose", parents=[common],
                       help="stationarity and normality battery")
    p.add_argument("csv")
    p.add_argument("--order", default=None, help="p,d,q: test residuals of this fit")
    p.add_argument("--seasonal", default=None, help="P,D,Q seasonal order")
    p.add_argument("--drift", action="store_true", help="include a mean/drift term")
    p.set_defaults(func=_cmd_diagnose)

    p = sub.add_parser("fit", parents=[common], help="fit one SARIMA specification")
    p.add_argument("csv")
    p.add_argument("--order", required=True, help="p,d,q")
    p.add_argument("--seasonal", default=None, help="P,D,Q")
    p.add_argument("--drift", action="store_true")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("autofit", parents=[common], help="criterion-ranked model search")
    p.add_argument("csv")
    p.add_argument("--criterion", choices=("aic", "bic"), default="aic")
    p.add_argument("--strategy", choices=("stepwise", "exhaustive"), default="stepwise")
    p.add_argument("--max-p", type=int, default=24)
    p.add_argument("--max-q", type=int, default=24)
    p.add_argument("--max-d", type=int, default=4)
    p.add_argument("--max-P", type=int, default=1)
    p.add_argument("--max-Q", type=int, default=1)
    p.add_argument("--max-D", type=int, default=1)
    p.add_argument("--no-drift", action="store_true", help="never include a drift term")
    p.add_argument("--force", action="store_true", help="allow huge exhaustive grids")
    p.set_defaults(func=_cmd_autofit)

    p = sub.add_parser("compare", parents=[common],
                       help="holdout comparison of ARIMA and six baselines")
    p.add_argument("csv")
    p.add_argument("--train-len", type=int, default=DEFAULT_TRAIN_LEN)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("forecast", parents=[common], help="multi-level interval forecast")
    p.add_argument("csv")
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--levels", default=",".join(str(int(lv * 100)) for lv in DEFAULT_LEVELS))
    p.add_argument("--order", default=None, help="p,d,q (omit to auto-select)")
    p.add_argument("--seasonal", default=None)
    p.add_argument("--drift", action="store_true")
    p.add_argument("--svg", default=None, help="write a fan chart to this SVG path")
    p.set_defaults(func=_cmd_forecast)

    p = sub.add_parser("report", parents=[common], help="full pipeline report")
    p.add_argument("csv")
    p.add_argument("--train-len", type=int, default=DEFAULT_TRAIN_LEN)
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--levels", default=",".join(str(int(lv * 100)) for lv in DEFAULT_LEVELS))
    p.add_argument("--criterion", choices=("aic", "bic"), default="aic")
    p.add_argument("--charts-dir", default=None, help="also emit SVG charts here")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DataError as exc:
        sys.stderr.write(f"admitcast: data error: {exc}\n")
        return 2
    except ConvergenceError as exc:
        sys.stderr.write(f"admitcast: convergence failure: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
