"""Standalone SVG emission for the fan chart and the seasonal plot.

Plain generated markup, no plotting dependency; every chart also writes a
companion CSV holding the exact plotted coordinates so other tools can
reproduce the figure.  Band CSV values are written at full precision and
equal the ForecastResult arrays bit for bit.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import DataError
from .sarima import ForecastResult
from .series import TimeSeries, seasonal_table

__all__ = ["emit_fan_chart", "emit_seasonal_plot"]

_WIDTH, _HEIGHT = 960, 480
_MARGIN = dict(left=64, right=24, top=24, bottom=40)


class _Scale:
    def __init__(self, x_range, y_range):
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range
        self.px0 = _MARGIN["left"]
        self.px1 = _WIDTH - _MARGIN["right"]
        self.py0 = _HEIGHT - _MARGIN["bottom"]
        self.py1 = _MARGIN["top"]

    def x(self, v: float) -> float:
        span = self.x1 - self.x0 or 1.0
        return self.px0 + (v - self.x0) / span * (self.px1 - self.px0)

    def y(self, v: float) -> float:
        span = self.y1 - self.y0 or 1.0
        return self.py0 + (v - self.y0) / span * (self.py1 - self.py0)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _polyline(scale: _Scale, xs, ys, color: str, width: float = 1.5) -> str:
    pts = " ".join(f"{_fmt(scale.x(x))},{_fmt(scale.y(y))}" for x, y in zip(xs, ys))
    return (f'<polyline fill="none" stroke="{color}" stroke-width="{width}" '
            f'points="{pts}"/>')


def _band_color(rank: float) -> str:
    """Darker shades for lower (inner) confidence levels."""
    lo = np.array([28, 68, 120])
    hi = np.array([198, 219, 239])
    rgb = (lo + (hi - lo) * rank).astype(int)
    return f"rgb({rgb[0]},{rgb[1]},{rgb[2]})"


def _axes(scale: _Scale, x_label: str, y_label: str, year_grid_from=None, x_max=None) -> list[str]:
    parts = [
        f'<line x1="{scale.px0}" y1="{scale.py0}" x2="{scale.px1}" y2="{scale.py0}" stroke="#444"/>',
        f'<line x1="{scale.px0}" y1="{scale.py0}" x2="{scale.px0}" y2="{scale.py1}" stroke="#444"/>',
        f'<text x="{(scale.px0 + scale.px1) / 2}" y="{_HEIGHT - 8}" text-anchor="middle" '
        f'font-size="13" fill="#222">{x_label}</text>',
        f'<text x="16" y="{(scale.py0 + scale.py1) / 2}" text-anchor="middle" font-size="13" '
        f'fill="#222" transform="rotate(-90 16 {(scale.py0 + scale.py1) / 2})">{y_label}</text>',
    ]
    ticks = np.linspace(scale.y0, scale.y1, 5)
    for t in ticks:
        parts.append(
            f'<text x="{scale.px0 - 6}" y="{_fmt(scale.y(t) + 4)}" text-anchor="end" '
            f'font-size="11" fill="#444">{t:.0f}</text>'
        )
    if year_grid_from is not None and x_max is not None:
        week = year_grid_from
        while week <= x_max:
            px = scale.x(week)
            parts.append(
                f'<line x1="{_fmt(px)}" y1="{scale.py1}" x2="{_fmt(px)}" y2="{scale.py0}" '
                f'stroke="#ccc" stroke-dasharray="3,4"/>'
            )
            week += year_grid_from
    return parts


def _svg_document(body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_WIDTH} {_HEIGHT}" '
        f'width="{_WIDTH}" height="{_HEIGHT}">\n'
        '<rect width="100%" height="100%" fill="white"/>\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def _companion_csv_path(path: Path) -> Path:
    return path.with_suffix(".csv")


def emit_fan_chart(history: TimeSeries, forecast: ForecastResult, path) -> tuple[Path, Path]:
    """History, point forecast and one nested translucent band per level.

    Writes `<path>` and a companion CSV of exact band coordinates; returns
    both paths.
    """
    if not forecast.levels:
        raise DataError("fan chart requires at least one confidence level")
    path = Path(path)
    n = len(history)
    h = forecast.point.size
    weeks_hist = np.arange(1, n + 1)
    weeks_fc = np.arange(n + 1, n + h + 1)

    y_min = min(history.values.min(), forecast.lower.min())
    y_max = max(history.values.max(), forecast.upper.max())
    pad = 0.05 * (y_max - y_min or 1.0)
    scale = _Scale((1, n + h), (y_min - pad, y_max + pad))

    body = _axes(scale, "week", "admissions", year_grid_from=history.period, x_max=n + h)
    order = np.argsort(forecast.levels)[::-1]  # widest band first, darker on top
    n_levels = len(forecast.levels)
    for rank, idx in enumerate(order):
        shade = _band_color(1.0 - rank / max(n_levels - 1, 1)) if n_levels > 1 \
            else _band_color(0.5)
        xs = np.concatenate([weeks_fc, weeks_fc[::-1]])
        ys = np.concatenate([forecast.upper[:, idx], forecast.lower[::-1, idx]])
        pts = " ".join(f"{_fmt(scale.x(x))},{_fmt(scale.y(y))}" for x, y in zip(xs, ys))
        body.append(f'<polygon fill="{shade}" fill-opacity="0.55" stroke="none" points="{pts}"/>')
    body.append(_polyline(scale, weeks_hist, history.values, "#111111", 1.2))
    body.append(_polyline(scale, weeks_fc, forecast.point, "#1459c7", 1.8))
    path.write_text(_svg_document(body), encoding="utf-8")

    csv_path = _companion_csv_path(path)
    with csv_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        header = ["step", "point", "sigma"]
        for lv in forecast.levels:
            tag = f"{round(lv * 100):g}"
            header += [f"lower_{tag}", f"upper_{tag}"]
        writer.writerow(header)
        for i in range(h):
            row = [i + 1, repr(float(forecast.point[i])), repr(float(forecast.sigma_h[i]))]
            for j in range(n_levels):
                row += [repr(float(forecast.lower[i, j])), repr(float(forecast.upper[i, j]))]
            writer.writerow(row)
    return path, csv_path


def emit_seasonal_plot(series: TimeSeries, path) -> tuple[Path, Path]:
    """One polyline per seasonal cycle over positions 1..period, with a legend."""
    rows = seasonal_table(series)  # validates period >= 2
    if series.period > len(series):
        raise DataError("period exceeds the series length")
    path = Path(path)
    y_min, y_max = series.values.min(), series.values.max()
    pad = 0.05 * (y_max - y_min or 1.0)
    scale = _Scale((1, series.period), (y_min - pad, y_max + pad))

    body = _axes(scale, "week of cycle", "admissions")
    n_cycles = len(rows)
    for i, row in enumerate(rows):
        hue = int(360 * i / max(n_cycles, 1))
        color = f"hsl({hue},65%,42%)"
        body.append(_polyline(scale, np.arange(1, row.size + 1), row, color, 1.4))
        body.append(
            f'<text x="{_WIDTH - _MARGIN["right"] - 92}" y="{_MARGIN["top"] + 16 * (i + 1)}" '
            f'font-size="12" fill="{color}">cycle {i + 1}</text>'
        )
    path.write_text(_svg_document(body), encoding="utf-8")

    csv_path = _companion_csv_path(path)
    with csv_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["cycle", "position", "value"])
        for i, row in enumerate(rows, start=1):
            for j, value in enumerate(row, start=1):
                writer.writerow([i, j, repr(float(value))])
    return path, csv_path
