"""Synthetic two-class text corpora for tests and demos.

Each class draws tokens uniformly from its own word pool; a configurable
fraction of the pooled vocabulary is shared between the classes, which
controls how separable the corpus is (overlap 0 gives disjoint
vocabularies, overlap 1 makes the classes indistinguishable).
"""

from __future__ import annotations

import numpy as np

from .text import NEGATIVE_LABEL, POSITIVE_LABEL, Document

__all__ = ["generate_corpus"]


def generate_corpus(
    size: int,
    positive_fraction: float = 0.5,
    overlap: float = 0.5,
    vocab_size: int = 120,
    doc_length: int = 25,
    seed: int = 0,
) -> list[Document]:
    """Generate ``size`` labeled documents with the given class mix.

    ``vocab_size`` is the per-class pool size; ``overlap`` is the fraction
    of that pool shared between classes.  Deterministic given the seed.
    """
    if size < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    if not 0 <= positive_fraction <= 1:
        raise ValueError(f"positive_fraction must be in [0, 1], got {positive_fraction}")
    if not 0 <= overlap <= 1:
        raise ValueError(f"overlap must be in [0, 1], got {overlap}")
    if vocab_size < 1 or doc_length < 1:
        raise ValueError("vocab_size and doc_length must be >= 1")

    n_shared = int(round(overlap * vocab_size))
    n_class = vocab_size - n_shared
    shared = [f"sh{i:04d}" for i in range(n_shared)]
    pos_pool = np.array([f"pw{i:04d}" for i in range(n_class)] + shared)
    neg_pool = np.array([f"nw{i:04d}" for i in range(n_class)] + shared)

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    n_pos = int(round(positive_fraction * size))
    label_order = np.array([1] * n_pos + [0] * (size - n_pos))
    rng.shuffle(label_order)

    docs = []
    for i, is_pos in enumerate(label_order):
        pool = pos_pool if is_pos else neg_pool
        tokens = pool[rng.integers(0, len(pool), size=doc_length)]
        docs.append(
            Document(
                id=f"doc{i:05d}",
                text=" ".join(tokens),
                label=POSITIVE_LABEL if is_pos else NEGATIVE_LABEL,
            )
        )
    return docs
