"""Parametric learning-curve families and closed-form least-squares fitting.

Five two-parameter families describe classifier performance as a function
of training percent::

    linear        y = a*x + b
    power         y = a * x**b
    logarithmic   y = a*ln(x) + b
    exponential   y = a * 10**(b*x)
    weiss_tian    y = a + b*x/(x + 1)

Each family is fitted by ordinary least squares in a linearized space
(power and exponential fits regress on log-transformed y), so fitting is
closed-form and deterministic.  The reported ``sse`` is always computed in
the original y space, which keeps fits of different families comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

__all__ = [
    "Y_CLAMP",
    "CurveFamily",
    "CurvePoint",
    "CurveFit",
    "FitOutcome",
    "FitError",
    "InsufficientPoints",
    "DegenerateDesign",
    "NonPositiveX",
    "fit",
    "fit_all",
    "predict",
]

# Floor applied to y before log transforms; f-measure is 0 when a model
# predicts no positives, and log(0) would drop the point entirely.
Y_CLAMP = 1e-6


class CurveFamily(Enum):
    """The closed set of supported curve families."""

    LINEAR = "linear"
    POWER = "power"
    LOGARITHMIC = "logarithmic"
    EXPONENTIAL = "exponential"
    WEISS_TIAN = "weiss_tian"


class FitError(ValueError):
    """Base class for curve-fitting failures."""


class InsufficientPoints(FitError):
    """Fewer than two points were supplied."""


class DegenerateDesign(FitError):
    """All points collapse onto one abscissa after transformation."""


class NonPositiveX(ValueError):
    """Training percent must be strictly positive."""


@dataclass(frozen=True)
class CurvePoint:
    """One learning-curve observation: (training percent, metric value)."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not self.x > 0:
            raise ValueError(f"training percent must be > 0, got {self.x}")
        if not math.isfinite(self.y):
            raise ValueError(f"metric value must be finite, got {self.y}")


@dataclass(frozen=True)
class CurveFit:
    """A fitted family: coefficients (a, b) plus residual statistics.

    ``sse`` is the sum of squared residuals in the original y space over the
    ``num_points`` points used for fitting.  ``clamped`` is set when any y
    value had to be floored at ``Y_CLAMP`` before a log transform.
    """

    family: CurveFamily
    a: float
    b: float
    sse: float
    num_points: int
    clamped: bool = False


@dataclass(frozen=True)
class FitOutcome:
    """One entry of a fit-all batch: the fit, or the error that prevented it."""

    family: CurveFamily
    fit: CurveFit | None
    error: str | None

    @property
    def ok(self) -> bool:
        return self.fit is not None


_LOG_Y_FAMILIES = (CurveFamily.POWER, CurveFamily.EXPONENTIAL)


def _transform(x: np.ndarray, y: np.ndarray, family: CurveFamily):
    """Map points into the family's linear space; returns (t, z, clamped)."""
    clamped = False
    if family in _LOG_Y_FAMILIES and np.any(y < Y_CLAMP):
        y = np.maximum(y, Y_CLAMP)
        clamped = True
    if family is CurveFamily.LINEAR:
        return x, y, clamped
    if family is CurveFamily.LOGARITHMIC:
        return np.log(x), y, clamped
    if family is CurveFamily.WEISS_TIAN:
        return x / (x + 1.0), y, clamped
    if family is CurveFamily.POWER:
        return np.log(x), np.log(y), clamped
    if family is CurveFamily.EXPONENTIAL:
        return x, np.log10(y), clamped
    raise ValueError(f"unknown family: {family!r}")


def _coefficients(slope: float, intercept: float, family: CurveFamily) -> tuple[float, float]:
    """Undo the linearization: map (slope, intercept) back to (a, b)."""
    if family in (CurveFamily.LINEAR, CurveFamily.LOGARITHMIC):
        return slope, intercept
    if family is CurveFamily.WEISS_TIAN:
        return intercept, slope
    if family is CurveFamily.POWER:
        return math.exp(intercept), slope
    return 10.0 ** intercept, slope  # exponential


def fit(points: Iterable[CurvePoint], family: CurveFamily) -> CurveFit:
    """Least-squares fit of one family to the given points.

    The regression is solved in closed form in the family's linearized
    space.  Raises :class:`InsufficientPoints` for fewer than two points
    and :class:`DegenerateDesign` when every transformed abscissa is
    identical (no unique solution).
    """
    pts = list(points)
    if len(pts) < 2:
        raise InsufficientPoints(f"need at least 2 points, got {len(pts)}")
    x = np.array([p.x for p in pts], dtype=float)
    y = np.array([p.y for p in pts], dtype=float)
    t, z, clamped = _transform(x, y, family)
    if np.all(t == t[0]):
        raise DegenerateDesign(
            f"all points share one abscissa after the {family.value} transform"
        )
    t_bar = t.mean()
    z_bar = z.mean()
    dt = t - t_bar
    slope = float(np.dot(dt, z - z_bar) / np.dot(dt, dt))
    intercept = float(z_bar - slope * t_bar)
    a, b = _coefficients(slope, intercept, family)
    residuals = y - _predict_array(family, a, b, x)
    return CurveFit(
        family=family,
        a=a,
        b=b,
        sse=float(np.dot(residuals, residuals)),
        num_points=len(pts),
        clamped=clamped,
    )


def fit_all(points: Iterable[CurvePoint]) -> list[FitOutcome]:
    """Fit every family to the same points, in declaration order.

    A family whose fit fails yields a :class:`FitOutcome` carrying the
    error message instead of aborting the batch.
    """
    pts = list(points)
    outcomes = []
    for family in CurveFamily:
        try:
            outcomes.append(FitOutcome(family, fit(pts, family), None))
        except FitError as exc:
            outcomes.append(FitOutcome(family, None, str(exc)))
    return outcomes


def _predict_array(family: CurveFamily, a: float, b: float, x: np.ndarray) -> np.ndarray:
    if family is CurveFamily.LINEAR:
        return a * x + b
    if family is CurveFamily.POWER:
        return a * np.power(x, b)
    if family is CurveFamily.LOGARITHMIC:
        return a * np.log(x) + b
    if family is CurveFamily.EXPONENTIAL:
        return a * np.power(10.0, b * x)
    return a + b * x / (x + 1.0)  # weiss_tian


def predict(curve_fit: CurveFit, x: float) -> float:
    """Evaluate the fitted family at training percent ``x`` (> 0)."""
    if x <= 0:
        raise NonPositiveX(f"training percent must be > 0, got {x}")
    return float(
        _predict_array(curve_fit.family, curve_fit.a, curve_fit.b, np.array([x], dtype=float))[0]
    )
