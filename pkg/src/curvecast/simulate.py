"""Iterative pool-based learning simulation.

Documents start in an unlabeled pool.  Each iteration moves one batch
(``bp`` percent of the original pool, floored, at least one document) from
the pool into the labeled set, retrains the learner on the labeled set,
and records accuracy and f-measure on the held-out test set at the current
training percent.  The first batch is always selected at random (active
selection needs a model first); subsequent batches follow the configured
strategy.  Predictions on a fixed stop set are recorded every iteration so
stopping analysis can run offline from the record.

Runs are fully deterministic: all randomness derives from the master seed
and the run index, training data is assembled in document-id order, and
selection never depends on set iteration order.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .curves import CurvePoint
from .forecast import LearningCurve
from .learners import (
    LinearModel,
    decision_value,
    evaluate,
    predict_linear,
    train_linear,
    train_tree,
    tree_predict,
)
from .stopping import DEFAULT_STOP_SET_SIZE, StopSet
from .text import (
    POSITIVE_LABEL,
    Document,
    build_vocabulary,
    default_stopwords,
    vectorize,
)

__all__ = [
    "STRATEGIES",
    "LEARNER_NAMES",
    "SimulationConfig",
    "PoolState",
    "RunRecord",
    "ConfigInvalid",
    "EmptyPool",
    "KTooLarge",
    "TooFewDocuments",
    "select_random",
    "select_closest_to_hyperplane",
    "kfold_split",
    "split_pool_test",
    "run_simulation",
    "average_curves",
    "write_manifest",
    "read_manifest",
]

STRATEGIES = ("random", "closest_to_hyperplane")
LEARNER_NAMES = ("linear", "tree")

MIN_TOKEN_FREQUENCY = 3


class ConfigInvalid(ValueError):
    """The simulation configuration is inconsistent."""


class EmptyPool(ValueError):
    """The training pool contains no documents."""


class KTooLarge(ValueError):
    """Asked to select more documents than remain unlabeled."""


class TooFewDocuments(ValueError):
    """Fewer documents than folds."""


@dataclass(frozen=True)
class SimulationConfig:
    """Batch percent, selection strategy, learner, and reproducibility knobs.

    ``folds=0`` means an explicit train/test split is supplied by the
    caller; ``initial_batch=0`` means the first (random) batch has the
    regular batch size.
    """

    bp: float
    strategy: str = "random"
    learner: str = "linear"
    seed: int = 0
    folds: int = 0
    initial_batch: int = 0
    stop_set_size: int = DEFAULT_STOP_SET_SIZE
    epochs: int = 20
    reg: float = 1e-4
    max_depth: int = 30
    min_leaf: int = 1

    def __post_init__(self) -> None:
        if not 0 < self.bp <= 100:
            raise ConfigInvalid(f"bp must be in (0, 100], got {self.bp}")
        if self.strategy not in STRATEGIES:
            raise ConfigInvalid(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.learner not in LEARNER_NAMES:
            raise ConfigInvalid(f"learner must be one of {LEARNER_NAMES}, got {self.learner!r}")
        if self.strategy == "closest_to_hyperplane" and self.learner != "linear":
            raise ConfigInvalid("closest_to_hyperplane selection requires the linear learner")
        if self.folds != 0 and self.folds < 2:
            raise ConfigInvalid(f"folds must be 0 or >= 2, got {self.folds}")
        if self.initial_batch < 0:
            raise ConfigInvalid(f"initial_batch must be >= 0, got {self.initial_batch}")
        if self.stop_set_size < 1:
            raise ConfigInvalid(f"stop_set_size must be >= 1, got {self.stop_set_size}")


@dataclass(frozen=True)
class PoolState:
    """Labeled / unlabeled / test document ids; pairwise disjoint."""

    labeled: frozenset[str]
    unlabeled: frozenset[str]
    test: frozenset[str]

    def __post_init__(self) -> None:
        if self.labeled & self.unlabeled or self.labeled & self.test or self.unlabeled & self.test:
            raise ValueError("labeled, unlabeled, and test sets must be pairwise disjoint")


@dataclass(frozen=True)
class RunRecord:
    """Everything one simulation run produced.

    Both curves share the same training-percent grid.  Stop-set predictions
    are +1/-1 per stop-set document, one tuple per iteration.
    """

    accuracy_curve: LearningCurve
    f_measure_curve: LearningCurve
    stop_set: StopSet
    stop_set_predictions: tuple[tuple[int, ...], ...]
    config: SimulationConfig
    fold: int
    pool_size: int
    test_size: int
    final_pools: PoolState

    @property
    def training_percents(self) -> tuple[float, ...]:
        return tuple(p.x for p in self.accuracy_curve.points)


def select_random(unlabeled, k: int, rng: np.random.Generator) -> list[str]:
    """Draw k distinct ids uniformly without replacement, in rng order."""
    ids = sorted(unlabeled)
    if k > len(ids):
        raise KTooLarge(f"k={k} exceeds pool of {len(ids)}")
    if k == 0:
        return []
    chosen = rng.choice(len(ids), size=k, replace=False)
    return [ids[int(j)] for j in chosen]


def select_closest_to_hyperplane(
    model: LinearModel, unlabeled, vectors: Mapping[str, object], k: int
) -> list[str]:
    """The k ids with smallest absolute margin; ties broken by ascending id."""
    ids = sorted(unlabeled)
    if k > len(ids):
        raise KTooLarge(f"k={k} exceeds pool of {len(ids)}")
    ranked = sorted(ids, key=lambda i: (abs(decision_value(model, vectors[i])), i))
    return ranked[:k]


def kfold_split(
    corpus: Sequence[Document], folds: int, seed: int
) -> list[tuple[list[str], list[str]]]:
    """Seeded shuffle, then contiguous partition into (train ids, test ids) folds."""
    if folds < 2:
        raise ConfigInvalid(f"folds must be >= 2, got {folds}")
    if len(corpus) < folds:
        raise TooFewDocuments(f"{len(corpus)} documents cannot fill {folds} folds")
    ids = [doc.id for doc in corpus]
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    order = rng.permutation(len(ids))
    parts = np.array_split(order, folds)
    splits = []
    for part in parts:
        test = {ids[int(j)] for j in part}
        train_ids = [d for d in ids if d not in test]
        test_ids = [ids[int(j)] for j in part]
        splits.append((train_ids, test_ids))
    return splits


def split_pool_test(
    corpus: Sequence[Document], test_fraction: float, seed: int
) -> tuple[list[str], list[str]]:
    """Seeded shuffle split into (pool ids, test ids)."""
    if not 0 < test_fraction < 1:
        raise ConfigInvalid(f"test_fraction must be in (0, 1), got {test_fraction}")
    ids = [doc.id for doc in corpus]
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    order = rng.permutation(len(ids))
    n_test = max(1, int(round(test_fraction * len(ids))))
    if n_test >= len(ids):
        raise ConfigInvalid("test_fraction leaves no pool documents")
    test = {ids[int(j)] for j in order[:n_test]}
    return [d for d in ids if d not in test], [ids[int(j)] for j in order[:n_test]]


def run_simulation(
    corpus: Sequence[Document],
    config: SimulationConfig,
    test_ids: Sequence[str] | None = None,
) -> list[RunRecord]:
    """Run the iterative protocol; one record per fold (one when folds=0).

    With ``folds=0`` the caller must supply ``test_ids``; every other
    document forms the pool.  With ``folds>=2`` the corpus is cross-validated
    and ``test_ids`` must be None.
    """
    docs = {doc.id: doc for doc in corpus}
    if len(docs) != len(corpus):
        raise ValueError("duplicate document ids in corpus")
    if config.folds >= 2:
        if test_ids is not None:
            raise ConfigInvalid("test_ids cannot be combined with folds >= 2")
        splits = kfold_split(corpus, config.folds, config.seed)
    else:
        if test_ids is None:
            raise ConfigInvalid("folds=0 requires explicit test_ids")
        test_set = set(test_ids)
        missing = test_set - set(docs)
        if missing:
            raise ValueError(f"test ids not in corpus: {sorted(missing)[:5]}")
        pool = [d.id for d in corpus if d.id not in test_set]
        splits = [(pool, list(test_ids))]
    return [
        _run_single(docs, pool_ids, fold_test_ids, config, fold)
        for fold, (pool_ids, fold_test_ids) in enumerate(splits)
    ]


def _batch_size(bp: float, pool_size: int) -> int:
    return max(1, math.floor(bp * pool_size / 100.0 + 1e-9))


def _run_single(
    docs: Mapping[str, Document],
    pool_ids: Sequence[str],
    test_ids: Sequence[str],
    config: SimulationConfig,
    fold: int,
) -> RunRecord:
    pool_ids = sorted(pool_ids)
    test_ids = sorted(test_ids)
    if not pool_ids:
        raise EmptyPool("no documents left for the training pool")
    if not test_ids:
        raise ConfigInvalid("no test documents")

    # The feature space is fixed up front from the pool text only (labels
    # unseen, test documents excluded), so curves measure learning rather
    # than feature drift.
    vocab = build_vocabulary(
        [docs[i] for i in pool_ids],
        stopwords=default_stopwords(),
        min_frequency=MIN_TOKEN_FREQUENCY,
    )
    vectors = {i: vectorize(docs[i], vocab) for i in (*pool_ids, *test_ids)}
    arrays = {i: np.asarray(vectors[i].indices, dtype=np.intp) for i in vectors}
    labels = {i: docs[i].label for i in vectors}
    gold_test = [labels[i] for i in test_ids]

    pool_size = len(pool_ids)
    batch = _batch_size(config.bp, pool_size)
    n_iterations = math.ceil(
        max(pool_size - (config.initial_batch or batch), 0) / batch
    ) + 1
    if n_iterations < 2:
        raise ConfigInvalid(
            "configuration yields a single iteration; a learning curve needs at least 2"
        )

    rng = np.random.default_rng(np.random.SeedSequence(entropy=config.seed, spawn_key=(fold,)))
    # One training seed per run, drawn before any selection so it is
    # identical across strategies (the 100%-labeled endpoint must match).
    train_seed = int(rng.integers(0, 2**31 - 1))
    stop_ids = select_random(pool_ids, min(config.stop_set_size, pool_size), rng)
    stop_arrays = [arrays[i] for i in stop_ids]

    unlabeled = set(pool_ids)
    labeled: list[str] = []
    acc_points: list[CurvePoint] = []
    fm_points: list[CurvePoint] = []
    stop_predictions: list[tuple[int, ...]] = []
    model: LinearModel | None = None
    iteration = 0

    while unlabeled:
        iteration += 1
        if iteration == 1:
            first = config.initial_batch or batch
            chosen = select_random(unlabeled, min(first, len(unlabeled)), rng)
        elif config.strategy == "closest_to_hyperplane":
            chosen = select_closest_to_hyperplane(
                model, unlabeled, arrays, min(batch, len(unlabeled))
            )
        else:
            chosen = select_random(unlabeled, min(batch, len(unlabeled)), rng)
        labeled.extend(chosen)
        unlabeled.difference_update(chosen)

        train_order = sorted(labeled)
        train_data = [(arrays[i], labels[i]) for i in train_order]
        if config.learner == "linear":
            model = train_linear(
                train_data,
                len(vocab),
                epochs=config.epochs,
                reg=config.reg,
                seed=train_seed,
            )
            test_preds = [predict_linear(model, arrays[i]) for i in test_ids]
            stop_signs = tuple(
                1 if decision_value(model, arr) >= 0 else -1 for arr in stop_arrays
            )
        else:
            tree = train_tree(
                train_data,
                len(vocab),
                max_depth=config.max_depth,
                min_leaf=config.min_leaf,
            )
            test_preds = [tree_predict(tree, vectors[i]) for i in test_ids]
            stop_signs = tuple(
                1 if tree_predict(tree, vectors[i]) == POSITIVE_LABEL else -1
                for i in stop_ids
            )

        report = evaluate(test_preds, gold_test)
        percent = 100.0 * len(labeled) / pool_size
        acc_points.append(CurvePoint(percent, report.accuracy))
        fm_points.append(CurvePoint(percent, report.f_measure))
        stop_predictions.append(stop_signs)

    provenance = f"seed={config.seed} fold={fold} {config.strategy}/{config.learner}"
    return RunRecord(
        accuracy_curve=LearningCurve(tuple(acc_points), "accuracy", provenance),
        f_measure_curve=LearningCurve(tuple(fm_points), "f_measure", provenance),
        stop_set=StopSet(tuple(stop_ids)),
        stop_set_predictions=tuple(stop_predictions),
        config=config,
        fold=fold,
        pool_size=pool_size,
        test_size=len(test_ids),
        final_pools=PoolState(
            labeled=frozenset(labeled), unlabeled=frozenset(), test=frozenset(test_ids)
        ),
    )


def average_curves(records: Sequence[RunRecord], metric_name: str) -> LearningCurve:
    """Point-wise mean of fold curves over their shared training-percent grid.

    Folds whose pools differ by a document are aligned by iteration index
    (grids then differ only in the last remainder batch); the averaged x is
    the mean of the fold x values at each index.
    """
    if not records:
        raise ValueError("no records to average")
    curves = [
        r.accuracy_curve if metric_name == "accuracy" else r.f_measure_curve
        for r in records
    ]
    length = min(len(c.points) for c in curves)
    points = tuple(
        CurvePoint(
            x=sum(c.points[j].x for c in curves) / len(curves),
            y=sum(c.points[j].y for c in curves) / len(curves),
        )
        for j in range(length)
    )
    return LearningCurve(points, metric_name, provenance=f"mean of {len(curves)} runs")


def write_manifest(path: str | Path, record: RunRecord) -> None:
    """Serialize a run record (minus the curves, which go to CSV) as JSON."""
    manifest = {
        "config": asdict(record.config),
        "fold": record.fold,
        "pool_size": record.pool_size,
        "test_size": record.test_size,
        "final_labeled": len(record.final_pools.labeled),
        "final_unlabeled": len(record.final_pools.unlabeled),
        "training_percents": [round(x, 6) for x in record.training_percents],
        "stop_set_ids": list(record.stop_set.ids),
        "stop_set_predictions": [list(p) for p in record.stop_set_predictions],
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")


def read_manifest(path: str | Path) -> dict:
    """Load a run manifest written by :func:`write_manifest`."""
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)
