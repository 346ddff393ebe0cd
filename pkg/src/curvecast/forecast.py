"""Forecast evaluation for learning curves.

A curve is split at a training-percent cutoff (TPC): points at or below
the cutoff fit the forecasting model, points above it score the forecast.
Forecast quality is the mean absolute difference between forecast and
observed values over the held-out points (the "average difference").
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .curves import CurveFamily, CurveFit, CurvePoint, FitError, fit, predict

__all__ = [
    "METRIC_NAMES",
    "CURVE_CSV_HEADER",
    "LearningCurve",
    "EvaluationConfig",
    "ForecastEvaluation",
    "SweepPoint",
    "EmptyTrain",
    "EmptyTest",
    "EmptyList",
    "split_at_tpc",
    "average_difference",
    "expected_n",
    "forecast_at_tpc",
    "sweep_tpc",
    "aggregate",
    "read_curves_csv",
    "write_curves_csv",
]

METRIC_NAMES = ("accuracy", "f_measure")
CURVE_CSV_HEADER = ("training_percent", "metric", "value")


class EmptyTrain(ValueError):
    """No curve points lie at or below the cutoff."""


class EmptyTest(ValueError):
    """No curve points lie above the cutoff."""


class EmptyList(ValueError):
    """An aggregate over zero evaluations is undefined."""


@dataclass(frozen=True)
class LearningCurve:
    """Ordered (training percent, metric value) points for one run and metric."""

    points: tuple[CurvePoint, ...]
    metric_name: str
    provenance: str = ""

    def __post_init__(self) -> None:
        if self.metric_name not in METRIC_NAMES:
            raise ValueError(
                f"metric_name must be one of {METRIC_NAMES}, got {self.metric_name!r}"
            )
        if len(self.points) < 2:
            raise ValueError(f"a learning curve needs at least 2 points, got {len(self.points)}")
        xs = [p.x for p in self.points]
        if any(x1 >= x2 for x1, x2 in zip(xs, xs[1:])):
            raise ValueError("training percents must be strictly increasing")

    @property
    def min_x(self) -> float:
        return self.points[0].x

    @property
    def max_x(self) -> float:
        return self.points[-1].x


@dataclass(frozen=True)
class EvaluationConfig:
    """Cutoff, batch percent, and family for one forecast evaluation."""

    tpc: float
    bp: float
    family: CurveFamily = CurveFamily.LOGARITHMIC

    def __post_init__(self) -> None:
        if not 0 < self.tpc < 100:
            raise ValueError(f"tpc must be in (0, 100), got {self.tpc}")
        if not 0 < self.bp <= 100:
            raise ValueError(f"bp must be in (0, 100], got {self.bp}")


@dataclass(frozen=True)
class ForecastEvaluation:
    """Average difference over the test points, with per-point residuals."""

    average_difference: float
    n: int
    residuals: tuple[float, ...]
    fit: CurveFit


@dataclass(frozen=True)
class SweepPoint:
    """One cutoff of a TPC sweep: an evaluation, or the error that blocked it."""

    tpc: float
    evaluation: ForecastEvaluation | None
    error: str | None

    @property
    def ok(self) -> bool:
        return self.evaluation is not None


def split_at_tpc(
    curve: LearningCurve, tpc: float
) -> tuple[list[CurvePoint], list[CurvePoint]]:
    """Partition the curve at the cutoff, points with x == tpc going to train.

    Order is preserved; train + test reproduce the curve exactly.
    """
    train = [p for p in curve.points if p.x <= tpc]
    test = [p for p in curve.points if p.x > tpc]
    if not train:
        raise EmptyTrain(f"no points at or below tpc={tpc}")
    if not test:
        raise EmptyTest(f"no points above tpc={tpc}")
    return train, test


def average_difference(
    curve_fit: CurveFit, test: Sequence[CurvePoint]
) -> ForecastEvaluation:
    """Mean absolute difference between forecast and observation over ``test``.

    Residuals are stored in test order; math.fsum keeps the mean invariant
    under permutation of the test points.
    """
    if not test:
        raise EmptyTest("cannot evaluate a forecast on zero test points")
    residuals = tuple(abs(predict(curve_fit, p.x) - p.y) for p in test)
    return ForecastEvaluation(
        average_difference=math.fsum(residuals) / len(residuals),
        n=len(residuals),
        residuals=residuals,
        fit=curve_fit,
    )


def expected_n(config: EvaluationConfig) -> int:
    """Number of test points implied by the cutoff and batch percent.

    Returns floor((100 - tpc) / bp).  Actual evaluation always uses the true
    test-point count; this is a consistency check for regular grids.
    """
    n = math.floor((100.0 - config.tpc) / config.bp + 1e-9)
    if n == 0:
        warnings.warn(
            f"tpc={config.tpc} with bp={config.bp} leaves no test points",
            stacklevel=2,
        )
    return n


def forecast_at_tpc(
    curve: LearningCurve, tpc: float, family: CurveFamily
) -> ForecastEvaluation:
    """Split at the cutoff, fit the family to the train side, score the test side."""
    train, test = split_at_tpc(curve, tpc)
    return average_difference(fit(train, family), test)


def sweep_tpc(
    curve: LearningCurve, tpc_values: Iterable[float], family: CurveFamily
) -> list[SweepPoint]:
    """Evaluate the forecast at each cutoff; failures become per-entry markers."""
    points = []
    for tpc in tpc_values:
        try:
            points.append(SweepPoint(tpc, forecast_at_tpc(curve, tpc, family), None))
        except (EmptyTrain, EmptyTest, FitError) as exc:
            points.append(SweepPoint(tpc, None, str(exc)))
    return points


def aggregate(evaluations: Sequence[ForecastEvaluation]) -> float:
    """Unweighted mean of the individual average differences."""
    if not evaluations:
        raise EmptyList("cannot aggregate zero evaluations")
    return math.fsum(e.average_difference for e in evaluations) / len(evaluations)


def write_curves_csv(path: str | Path, curves: Iterable[LearningCurve]) -> None:
    """Write curves as ``training_percent,metric,value`` rows, 6 decimal places."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CURVE_CSV_HEADER)
        for curve in curves:
            for p in curve.points:
                writer.writerow([f"{p.x:.6f}", curve.metric_name, f"{p.y:.6f}"])


def read_curves_csv(path: str | Path) -> dict[str, LearningCurve]:
    """Read a curve CSV back into one LearningCurve per metric present."""
    by_metric: dict[str, list[CurvePoint]] = {}
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != CURVE_CSV_HEADER:
            raise ValueError(
                f"{path}: expected header {','.join(CURVE_CSV_HEADER)}, got {header}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            x, metric, value = row
            by_metric.setdefault(metric.strip(), []).append(
                CurvePoint(float(x), float(value))
            )
    curves = {}
    for metric, pts in by_metric.items():
        pts.sort(key=lambda p: p.x)
        curves[metric] = LearningCurve(tuple(pts), metric, provenance=str(path))
    return curves
