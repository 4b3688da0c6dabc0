import csv
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from admitcast.charts import emit_fan_chart, emit_seasonal_plot
from admitcast.errors import DataError
from admitcast.sarima import SarimaSpec, fit, forecast
from admitcast.series import TimeSeries

SVG_NS = {"svg": "http://www.w3.org/2000/svg"}


@pytest.fixture()
def fitted():
    rng = np.random.default_rng(21)
    series = TimeSeries(np.round(60 + rng.standard_normal(80) * 5), period=4)
    return series, fit(SarimaSpec(1, 0, 0, include_drift=True), series)


def read_bands(csv_path):
    with open(csv_path, newline="") as handle:
        return list(csv.DictReader(handle))


class TestFanChart:
    def test_band_count_and_nesting(self, fitted, tmp_path):
        series, model = fitted
        levels = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99]
        fc = forecast(model, 12, levels)
        svg_path, csv_path = emit_fan_chart(series, fc, tmp_path / "fan.svg")
        polygons = ET.parse(svg_path).findall(".//svg:polygon", SVG_NS)
        assert len(polygons) == 10
        rows = read_bands(csv_path)
        assert len(rows) == 12
        for row in rows:
            widths = [float(row[f"upper_{int(lv * 100)}"]) - float(row[f"lower_{int(lv * 100)}"])
                      for lv in levels]
            assert all(a < b for a, b in zip(widths, widths[1:]))

    def test_csv_equals_forecast_exactly(self, fitted, tmp_path):
        series, model = fitted
        fc = forecast(model, 6, [0.8, 0.95])
        _, csv_path = emit_fan_chart(series, fc, tmp_path / "fan.svg")
        rows = read_bands(csv_path)
        for i, row in enumerate(rows):
            assert float(row["point"]) == fc.point[i]
            assert float(row["sigma"]) == fc.sigma_h[i]
            assert float(row["lower_80"]) == fc.lower[i, 0]
            assert float(row["upper_95"]) == fc.upper[i, 1]

    def test_single_level(self, fitted, tmp_path):
        series, model = fitted
        fc = forecast(model, 5, [0.95])
        svg_path, _ = emit_fan_chart(series, fc, tmp_path / "one.svg")
        assert len(ET.parse(svg_path).findall(".//svg:polygon", SVG_NS)) == 1

    def test_horizon_one(self, fitted, tmp_path):
        series, model = fitted
        fc = forecast(model, 1, [0.9])
        svg_path, csv_path = emit_fan_chart(series, fc, tmp_path / "h1.svg")
        assert len(read_bands(csv_path)) == 1
        assert svg_path.exists()


class TestSeasonalPlot:
    def test_five_polylines_for_bundled_shape(self, tmp_path):
        series = TimeSeries(np.arange(244.0), period=52)
        svg_path, csv_path = emit_seasonal_plot(series, tmp_path / "seasonal.svg")
        lines = ET.parse(svg_path).findall(".//svg:polyline", SVG_NS)
        assert len(lines) == 5
        rows = read_bands(csv_path)
        assert len(rows) == 244
        assert rows[-1] == {"cycle": "5", "position": "36", "value": "243.0"}

    def test_single_cycle(self, tmp_path):
        series = TimeSeries(np.arange(8.0), period=8)
        svg_path, _ = emit_seasonal_plot(series, tmp_path / "one.svg")
        assert len(ET.parse(svg_path).findall(".//svg:polyline", SVG_NS)) == 1

    def test_period_longer_than_series(self, tmp_path):
        series = TimeSeries(np.arange(5.0), period=12)
        with pytest.raises(DataError):
            emit_seasonal_plot(series, tmp_path / "bad.svg")
