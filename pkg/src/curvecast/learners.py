"""Binary base classifiers over sparse binary features, plus test metrics.

Two learners are provided, both deterministic given their inputs:

* a linear max-margin classifier trained by seeded stochastic subgradient
  descent on the L2-regularized hinge loss (learning rate 1/(reg*t), bias
  handled as an always-on regularized feature), and
* a greedy decision tree on feature presence/absence splits chosen by
  maximum Gini impurity reduction, ties broken toward the lowest feature
  index.

``evaluate`` computes accuracy, precision, recall, and f-measure against a
designated positive class.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .text import NEGATIVE_LABEL, POSITIVE_LABEL, FeatureVector

__all__ = [
    "LinearModel",
    "TreeNode",
    "MetricReport",
    "EmptyData",
    "EmptyInput",
    "LengthMismatch",
    "train_linear",
    "decision_value",
    "predict_linear",
    "train_tree",
    "tree_predict",
    "evaluate",
]


class EmptyData(ValueError):
    """Training requires at least one example."""


class EmptyInput(ValueError):
    """Evaluation requires at least one prediction."""


class LengthMismatch(ValueError):
    """Paired label lists must have equal lengths."""


@dataclass
class LinearModel:
    """Dense weight vector plus bias; ``degenerate`` marks single-class training."""

    weights: np.ndarray
    bias: float
    degenerate: bool = False


def _as_indices(vector) -> np.ndarray:
    """Active-feature indices as an int array (FeatureVector or array-like)."""
    if isinstance(vector, FeatureVector):
        return np.asarray(vector.indices, dtype=np.intp)
    return np.asarray(vector, dtype=np.intp)


def train_linear(
    data: Sequence[tuple],
    num_features: int,
    epochs: int = 20,
    reg: float = 1e-4,
    seed: int = 0,
    positive_label: str = POSITIVE_LABEL,
) -> LinearModel:
    """Hinge-loss SGD over ``data`` = (feature vector, label) pairs.

    The same seed, data order, and hyperparameters always produce the same
    model.  Single-class data yields a constant classifier flagged as
    degenerate instead of raising.
    """
    rows = list(data)
    if not rows:
        raise EmptyData("no training examples")
    y = np.array([1.0 if label == positive_label else -1.0 for _, label in rows])
    if np.all(y == y[0]):
        return LinearModel(np.zeros(num_features), float(y[0]), degenerate=True)

    bias_slot = num_features
    cols = [np.append(_as_indices(v), bias_slot) for v, _ in rows]
    # w is kept as scale * v so the per-step L2 shrinkage w *= (1 - 1/t)
    # costs O(1) instead of touching every weight.
    v = np.zeros(num_features + 1)
    scale = 1.0
    rng = np.random.default_rng(seed)
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(len(rows)):
            t += 1
            scale *= 1.0 - 1.0 / t
            if scale == 0.0:  # only at t == 1, where the step zeroes w anyway
                v[:] = 0.0
                scale = 1.0
            idx = cols[i]
            if y[i] * scale * v[idx].sum() < 1.0:
                v[idx] += y[i] / (reg * t * scale)
    w = scale * v
    return LinearModel(w[:num_features], float(w[bias_slot]), degenerate=False)


def decision_value(model: LinearModel, vector) -> float:
    """Un-normalized margin w.v + bias; the predicted class is its sign."""
    return float(model.weights[_as_indices(vector)].sum() + model.bias)


def predict_linear(
    model: LinearModel,
    vector,
    positive_label: str = POSITIVE_LABEL,
    negative_label: str = NEGATIVE_LABEL,
) -> str:
    """Classify by the sign of the decision value (0 counts as positive)."""
    return positive_label if decision_value(model, vector) >= 0 else negative_label


@dataclass
class TreeNode:
    """Internal node (split on one feature) or leaf (predicted label).

    The left child holds documents where the split feature is absent, the
    right child those where it is present.
    """

    feature: int | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    label: str | None = None

    @property
    def is_leaf(self) -> bool:
        return self.label is not None


def train_tree(
    data: Sequence[tuple],
    num_features: int,
    max_depth: int = 30,
    min_leaf: int = 1,
    positive_label: str = POSITIVE_LABEL,
    negative_label: str = NEGATIVE_LABEL,
) -> TreeNode:
    """Greedy Gini-impurity tree over presence/absence splits.

    A node becomes a leaf when it is pure, the depth limit is reached, it
    holds ``min_leaf`` or fewer documents, or no split with positive gain
    keeps both children at ``min_leaf`` documents.  Leaves predict the
    majority label, ties going to the positive class.
    """
    rows = list(data)
    if not rows:
        raise EmptyData("no training examples")
    index_arrays = [_as_indices(v) for v, _ in rows]
    is_pos = np.array([label == positive_label for _, label in rows])

    def majority(docs: np.ndarray, n_pos: int) -> str:
        return positive_label if 2 * n_pos >= len(docs) else negative_label

    def build(docs: np.ndarray, depth: int) -> TreeNode:
        n = len(docs)
        n_pos = int(is_pos[docs].sum())
        if n_pos in (0, n) or depth >= max_depth or n <= min_leaf:
            return TreeNode(label=majority(docs, n_pos))

        lengths = np.array([len(index_arrays[d]) for d in docs])
        if lengths.sum() == 0:  # no active features anywhere
            return TreeNode(label=majority(docs, n_pos))
        flat = np.concatenate([index_arrays[d] for d in docs])
        owners = np.repeat(docs, lengths)
        present = np.bincount(flat, minlength=num_features)
        pos_present = np.bincount(flat[is_pos[owners]], minlength=num_features)

        n_right = present.astype(float)
        n_left = n - n_right
        pos_right = pos_present.astype(float)
        pos_left = n_pos - pos_right
        with np.errstate(divide="ignore", invalid="ignore"):
            p_r = np.where(n_right > 0, pos_right / np.maximum(n_right, 1), 0.0)
            p_l = np.where(n_left > 0, pos_left / np.maximum(n_left, 1), 0.0)
        gini_right = 2.0 * p_r * (1.0 - p_r)
        gini_left = 2.0 * p_l * (1.0 - p_l)
        p_parent = n_pos / n
        parent = 2.0 * p_parent * (1.0 - p_parent)
        gains = parent - (n_right * gini_right + n_left * gini_left) / n
        gains[(n_right < min_leaf) | (n_left < min_leaf)] = -np.inf

        feature = int(np.argmax(gains))  # first maximum: lowest feature index
        if not gains[feature] > 1e-12:
            return TreeNode(label=majority(docs, n_pos))

        right_docs = np.unique(owners[flat == feature])
        right_mask = np.isin(docs, right_docs, assume_unique=True)
        node = TreeNode(feature=feature)
        node.left = build(docs[~right_mask], depth + 1)
        node.right = build(docs[right_mask], depth + 1)
        return node

    return build(np.arange(len(rows)), 0)


def tree_predict(tree: TreeNode, vector: FeatureVector) -> str:
    """Route the document down the tree by feature presence."""
    indices = vector.indices
    node = tree
    while not node.is_leaf:
        pos = bisect_left(indices, node.feature)
        present = pos < len(indices) and indices[pos] == node.feature
        node = node.right if present else node.left
    return node.label


@dataclass(frozen=True)
class MetricReport:
    """Confusion counts and the derived classification metrics."""

    accuracy: float
    precision: float
    recall: float
    f_measure: float
    tp: int
    fp: int
    tn: int
    fn: int


def evaluate(
    predictions: Sequence[str],
    gold: Sequence[str],
    positive_label: str = POSITIVE_LABEL,
) -> MetricReport:
    """Score predictions against gold labels.

    Precision, recall, and f-measure are defined as 0 when their
    denominator is 0 (e.g. a model that predicts no positives).
    """
    if len(predictions) != len(gold):
        raise LengthMismatch(
            f"{len(predictions)} predictions vs {len(gold)} gold labels"
        )
    if not predictions:
        raise EmptyInput("cannot evaluate zero predictions")
    tp = fp = tn = fn = 0
    for pred, true in zip(predictions, gold):
        if pred == positive_label:
            if true == positive_label:
                tp += 1
            else:
                fp += 1
        else:
            if true == positive_label:
                fn += 1
            else:
                tn += 1
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f_measure = (
        2.0 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    )
    return MetricReport(
        accuracy=(tp + tn) / len(predictions),
        precision=precision,
        recall=recall,
        f_measure=f_measure,
        tp=tp,
        fp=fp,
        tn=tn,
        fn=fn,
    )
