"""CSV ingestion, train/holdout splitting and report serialization.

The input schema is one header row `week_start_date,admissions` followed by
ISO-8601 dates exactly seven days apart and nonnegative integer counts.
Reports serialize to a single key-sorted JSON document (or one CSV per
section) with numbers rendered at six significant digits, so identical runs
produce byte-identical files.
"""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError
from .series import TimeSeries

__all__ = ["load_csv", "split", "RunReport", "emit_report", "sha256_of_file"]

SCHEMA_VERSION = 1
DATE_COLUMN = "week_start_date"
VALUE_COLUMN = "admissions"


def sha256_of_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_csv(
    path,
    period: int = 52,
    date_column: str = DATE_COLUMN,
    value_column: str = VALUE_COLUMN,
) -> TimeSeries:
    """Load a weekly admissions series, rejecting malformed rows by line number."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"input file not found: {path}")
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        for needed in (date_column, value_column):
            if needed not in header:
                raise DataError(f"{path}: missing required column {needed!r} in header {header}")
        date_idx = header.index(date_column)
        value_idx = header.index(value_column)

        dates: list[_dt.date] = []
        values: list[float] = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) <= max(date_idx, value_idx):
                raise DataError(f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}")
            raw_date = row[date_idx].strip()
            raw_value = row[value_idx].strip()
            try:
                date = _dt.date.fromisoformat(raw_date)
            except ValueError:
                raise DataError(f"{path}:{lineno}: invalid ISO-8601 date {raw_date!r}") from None
            try:
                count = int(raw_value)
            except ValueError:
                raise DataError(
                    f"{path}:{lineno}: admissions must be an integer, got {raw_value!r}"
                ) from None
            if count < 0:
                raise DataError(f"{path}:{lineno}: admissions must be nonnegative, got {count}")
            if dates:
                gap = (date - dates[-1]).days
                if gap != 7:
                    raise DataError(
                        f"{path}:{lineno}: dates must advance by exactly 7 days, "
                        f"got a {gap}-day step from {dates[-1]} to {date}"
                    )
            dates.append(date)
            values.append(float(count))

    if not values:
        raise DataError(f"{path}: no data rows found")
    return TimeSeries(np.array(values), start_date=dates[0], period=period)


def split(series: TimeSeries, train_len: int = 200) -> tuple[TimeSeries, TimeSeries]:
    """First `train_len` observations for fitting, the remainder for scoring."""
    n = len(series)
    if not 1 <= train_len < n:
        raise DataError(f"train_len must lie in [1, {n - 1}], got {train_len}")
    train = TimeSeries(series.values[:train_len], start_date=series.start_date,
                       period=series.period)
    test_start = series.start_date + _dt.timedelta(days=7 * train_len)
    test = TimeSeries(series.values[train_len:], start_date=test_start, period=series.period)
    return train, test


@dataclass(frozen=True)
class RunReport:
    """Full pipeline output: diagnostics, comparison, model and forecast sections."""

    diagnostics: dict
    comparison: dict
    model: dict
    forecast: dict
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "provenance": self.provenance,
            "diagnostics": self.diagnostics,
            "comparison": self.comparison,
            "model": self.model,
            "forecast": self.forecast,
        }


def _round6(value):
    """Render numbers at 6 significant digits; NaN/inf become null."""
    if isinstance(value, dict):
        return {k: _round6(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round6(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_round6(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(f"{value:.6g}")
    return value


def report_json_bytes(report: RunReport) -> bytes:
    doc = _round6(report.to_dict())
    return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode("utf-8")


def _write_section_csv(path: Path, rows: list[dict]) -> None:
    if not rows:
        path.write_text("", encoding="utf-8")
        return
    fields = list(rows[0].keys())
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(v) for k, v in row.items()})


def _csv_cell(value) -> str:
    value = _round6(value)
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def emit_report(report: RunReport, format: str = "json", path=None) -> list[Path]:
    """Serialize the report; JSON writes one document, CSV one file per section.

    Returns the list of files written.
    """
    if format not in ("json", "csv"):
        raise DataError(f"format must be 'json' or 'csv', got {format!r}")
    if path is None:
        raise DataError("an output path is required")
    path = Path(path)
    if path.parent and not path.parent.exists():
        raise DataError(f"output directory does not exist: {path.parent}")

    if format == "json":
        path.write_bytes(report_json_bytes(report))
        return [path]

    stem = path.with_suffix("")
    written = []
    diag_rows = [
        dict(section=section, **entry)
        for section, entries in report.diagnostics.items()
        if isinstance(entries, list)
        for entry in entries
    ]
    targets = {
        "diagnostics": diag_rows,
        "comparison": report.comparison.get("rows", []),
        "model": report.model.get("coefficients", []),
        "forecast": _forecast_rows(report.forecast),
    }
    for section, rows in targets.items():
        target = Path(f"{stem}_{section}.csv")
        _write_section_csv(target, rows)
        written.append(target)
    return written


def _forecast_rows(forecast: dict) -> list[dict]:
    point = forecast.get("point", [])
    sigma = forecast.get("sigma_h", [])
    levels = forecast.get("levels", [])
    lower = forecast.get("lower", [])
    upper = forecast.get("upper", [])
    rows = []
    for i in range(len(point)):
        row = {"step": i + 1, "point": point[i], "sigma": sigma[i]}
        for j, level in enumerate(levels):
            tag = f"{round(level * 100):g}"
            row[f"lower_{tag}"] = lower[i][j]
            row[f"upper_{tag}"] = upper[i][j]
        rows.append(row)
    return rows
