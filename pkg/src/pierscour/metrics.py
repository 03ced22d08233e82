"""Error and uncertainty measures for measured-vs-estimated comparisons.

All measures follow the sign convention ``error = estimated - measured``,
so a model that overestimates has positive bias.  The 95% uncertainty band
width is 1.96 times the sample standard deviation of the errors.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ValidationError

__all__ = [
    "Units",
    "PredictionPair",
    "MetricReport",
    "compute_metrics",
    "metrics_from_pairs",
    "write_metric_rows",
    "METRIC_CSV_COLUMNS",
]

Z_95 = 1.96

METRIC_CSV_COLUMNS = ["model_id", "n", "r2", "rmse_m", "bias_m", "mae_m", "band_m"]


class Units(str, Enum):
    """What the compared values are expressed in."""

    METERS = "m"
    DIMENSIONLESS = "dimensionless"


class PredictionPair(NamedTuple):
    measured: float
    estimated: float


@dataclass(frozen=True)
class MetricReport:
    """One model's error suite on one sample.

    ``r2`` is None when the measured values have zero variance; ``se`` and
    ``band`` are None when n < 2.  Undefined values are reported as None
    rather than silently coerced, so ranking code cannot misread them.
    """

    n: int
    bias: float
    r2: float | None
    rmse: float
    mae: float
    se: float | None
    band: float | None
    units: Units

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "bias": self.bias,
            "r2": self.r2,
            "rmse": self.rmse,
            "mae": self.mae,
            "se": self.se,
            "band": self.band,
            "units": self.units.value,
        }


def compute_metrics(
    measured,
    estimated,
    units: Units = Units.DIMENSIONLESS,
) -> MetricReport:
    """Compute bias, R2, RMSE, MAE, Se, and the 95% band width.

    Parameters
    ----------
    measured, estimated : array_like
        Equal-length samples of finite values.
    units : Units
        Label recorded on the report; no conversion is performed.

    Raises
    ------
    ValidationError
        On empty input, length mismatch, or non-finite values.
    """
    y = np.asarray(measured, dtype=float)
    y_hat = np.asarray(estimated, dtype=float)
    if y.ndim != 1 or y_hat.ndim != 1:
        raise ValidationError("measured and estimated must be one-dimensional")
    if y.size != y_hat.size:
        raise ValidationError(
            f"measured and estimated lengths differ: {y.size} vs {y_hat.size}"
        )
    if y.size == 0:
        raise ValidationError("cannot compute metrics on an empty sample")
    if not np.isfinite(y).all():
        raise ValidationError("measured values must be finite")
    if not np.isfinite(y_hat).all():
        raise ValidationError("estimated values must be finite")

    n = y.size
    errors = y_hat - y
    bias = float(np.mean(errors))
    rmse = float(np.sqrt(np.mean(errors**2)))
    mae = float(np.mean(np.abs(errors)))

    # all-equal measured values make the R2 denominator meaningless
    sst = float(np.sum((y - np.mean(y)) ** 2))
    if sst == 0.0 or bool(np.all(y == y[0])):
        r2 = None
    else:
        r2 = 1.0 - float(np.sum((y - y_hat) ** 2)) / sst

    if n < 2:
        se = band = None
    else:
        se = float(np.sqrt(np.sum((errors - bias) ** 2) / (n - 1)))
        band = Z_95 * se

    return MetricReport(n=n, bias=bias, r2=r2, rmse=rmse, mae=mae, se=se, band=band, units=units)


def metrics_from_pairs(pairs: Sequence[PredictionPair], units: Units = Units.DIMENSIONLESS) -> MetricReport:
    """Convenience wrapper over :func:`compute_metrics` for pair sequences."""
    pairs = list(pairs)
    return compute_metrics(
        [p.measured for p in pairs], [p.estimated for p in pairs], units=units
    )


def _cell(value) -> str:
    return "" if value is None else repr(float(value))


def write_metric_rows(path, rows: Sequence[tuple[str, MetricReport]]) -> None:
    """Write ``model_id,n,r2,rmse_m,bias_m,mae_m,band_m`` CSV rows.

    Undefined metrics become empty cells.  The column names follow the
    meters-reporting convention regardless of the reports' units label;
    callers mixing units should check ``MetricReport.units``.
    """
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(METRIC_CSV_COLUMNS)
        for model_id, report in rows:
            writer.writerow(
                [
                    model_id,
                    report.n,
                    _cell(report.r2),
                    _cell(report.rmse),
                    _cell(report.bias),
                    _cell(report.mae),
                    _cell(report.band),
                ]
            )
