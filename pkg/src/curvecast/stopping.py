"""Agreement-based stopping detection for iterative learning runs.

Consecutive models' predictions on a fixed stop set are compared with
Cohen's kappa; the detector fires once the agreement stays at or above a
threshold for a window of consecutive iterations.  The firing point can
then be compared against a forecasting cutoff to see whether stopping
precedes it (in which case annotating up to the cutoff wastes effort).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .learners import EmptyInput, LengthMismatch

__all__ = [
    "DEFAULT_STOP_SET_SIZE",
    "DEFAULT_THRESHOLD",
    "DEFAULT_WINDOW",
    "StopSet",
    "StoppingDecision",
    "TpcComparison",
    "HistoryTooShort",
    "NotFired",
    "cohens_kappa",
    "sp_stopping",
    "compare_stop_to_tpc",
]

DEFAULT_STOP_SET_SIZE = 2000
DEFAULT_THRESHOLD = 0.99
DEFAULT_WINDOW = 3


class HistoryTooShort(ValueError):
    """Not enough recorded iterations for the requested window."""


class NotFired(ValueError):
    """The decision never fired, so there is no stopping percent to compare."""


@dataclass(frozen=True)
class StopSet:
    """Fixed random sample of pool documents used only to measure agreement."""

    ids: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class StoppingDecision:
    """Outcome of the detector: where it fired (if at all) and the kappa trace."""

    fired: bool
    iteration: int | None
    stopping_percent: float | None
    kappa_trace: tuple[float, ...]


@dataclass(frozen=True)
class TpcComparison:
    """Whether the stopping point strictly precedes a forecasting cutoff."""

    stopping_percent: float
    tpc: float
    precedes_tpc: bool


def cohens_kappa(a: Sequence, b: Sequence) -> float:
    """Chance-corrected agreement between two equal-length label lists.

    kappa = (p_o - p_e) / (1 - p_e), with p_o the observed agreement
    fraction and p_e the expected agreement under independent marginals.
    When p_e is 1 (both lists constant and identical in class), kappa is
    defined as 1 if the lists agree everywhere and 0 otherwise.
    """
    if len(a) != len(b):
        raise LengthMismatch(f"{len(a)} labels vs {len(b)} labels")
    n = len(a)
    if n == 0:
        raise EmptyInput("cannot compute agreement over zero labels")
    p_o = sum(x == y for x, y in zip(a, b)) / n
    counts_a = Counter(a)
    counts_b = Counter(b)
    p_e = sum(
        (counts_a[c] / n) * (counts_b[c] / n) for c in set(counts_a) | set(counts_b)
    )
    if p_e == 1.0:
        return 1.0 if p_o == 1.0 else 0.0
    return (p_o - p_e) / (1.0 - p_e)


def sp_stopping(
    prediction_history: Sequence[Sequence],
    training_percents: Sequence[float],
    threshold: float = DEFAULT_THRESHOLD,
    window: int = DEFAULT_WINDOW,
) -> StoppingDecision:
    """Fire at the first iteration closing a window of high consecutive kappas.

    ``prediction_history`` holds one stop-set prediction list per iteration;
    ``training_percents`` gives the training percent of each iteration.  The
    kappa at iteration t compares the predictions of iterations t-1 and t.
    """
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    history = list(prediction_history)
    if len(history) != len(training_percents):
        raise LengthMismatch(
            f"{len(history)} prediction lists vs {len(training_percents)} training percents"
        )
    if len(history) < 2 or len(history) - 1 < window:
        raise HistoryTooShort(
            f"{len(history)} iterations allow {max(len(history) - 1, 0)} comparisons, "
            f"need at least {window}"
        )
    kappas = [cohens_kappa(history[t - 1], history[t]) for t in range(1, len(history))]
    run = 0
    for j, kappa in enumerate(kappas):
        run = run + 1 if kappa >= threshold else 0
        if run >= window:
            t = j + 1  # history index of the iteration closing the window
            return StoppingDecision(
                fired=True,
                iteration=t,
                stopping_percent=float(training_percents[t]),
                kappa_trace=tuple(kappas),
            )
    return StoppingDecision(False, None, None, tuple(kappas))


def compare_stop_to_tpc(decision: StoppingDecision, tpc: float) -> TpcComparison:
    """Report whether the firing point strictly precedes the cutoff."""
    if not decision.fired:
        raise NotFired("the stopping decision never fired")
    return TpcComparison(
        stopping_percent=decision.stopping_percent,
        tpc=tpc,
        precedes_tpc=decision.stopping_percent < tpc,
    )
