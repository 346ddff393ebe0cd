"""Binary bag-of-words featurization for labeled text corpora.

Documents are tokenized by lowercasing and splitting on runs of
non-alphanumeric characters.  The vocabulary keeps tokens that occur at
least ``min_frequency`` times across the training corpus (stopwords
excluded) and assigns feature indices in lexicographic term order, so the
feature space is reproducible across runs and platforms.  Feature values
are binary: a document's vector is the set of vocabulary indices whose
term occurs in it at least once.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

__all__ = [
    "POSITIVE_LABEL",
    "NEGATIVE_LABEL",
    "LABELS",
    "Document",
    "Vocabulary",
    "FeatureVector",
    "EmptyCorpus",
    "tokenize",
    "build_vocabulary",
    "vectorize",
    "load_corpus_jsonl",
    "write_corpus_jsonl",
    "load_stopwords",
    "default_stopwords",
]

POSITIVE_LABEL = "pos"
NEGATIVE_LABEL = "neg"
LABELS = (POSITIVE_LABEL, NEGATIVE_LABEL)

# Unicode alphanumerics (word characters minus underscore).
_TOKEN_RE = re.compile(r"[^\W_]+")


class EmptyCorpus(ValueError):
    """A vocabulary cannot be built from zero documents."""


@dataclass(frozen=True)
class Document:
    """One labeled text document."""

    id: str
    text: str
    label: str

    def __post_init__(self) -> None:
        if self.label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}, got {self.label!r}")


@dataclass(frozen=True)
class FeatureVector:
    """Sparse binary features: the sorted indices of active vocabulary terms."""

    indices: tuple[int, ...]


@dataclass(frozen=True)
class Vocabulary:
    """Ordered term-to-index map built from a training corpus."""

    terms: dict[str, int]
    min_frequency: int
    stopwords: frozenset[str] = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, token: str) -> bool:
        return token in self.terms


def tokenize(text: str) -> list[str]:
    """Lowercased tokens split on runs of non-alphanumeric characters."""
    return _TOKEN_RE.findall(text.lower())


def build_vocabulary(
    corpus: Sequence[Document],
    stopwords: Iterable[str] = frozenset(),
    min_frequency: int = 3,
) -> Vocabulary:
    """Collect terms with total corpus frequency >= ``min_frequency``.

    Stopwords are dropped regardless of frequency.  Indices are assigned in
    lexicographic term order.  Only training documents should be passed;
    vectorizing a test document never extends the vocabulary.
    """
    if not corpus:
        raise EmptyCorpus("cannot build a vocabulary from an empty corpus")
    stop = frozenset(stopwords)
    counts: Counter[str] = Counter()
    for doc in corpus:
        counts.update(tokenize(doc.text))
    kept = sorted(t for t, c in counts.items() if c >= min_frequency and t not in stop)
    return Vocabulary({t: i for i, t in enumerate(kept)}, min_frequency, stop)


def vectorize(doc: Document, vocab: Vocabulary) -> FeatureVector:
    """Binary feature vector of ``doc``; out-of-vocabulary tokens are ignored."""
    terms = vocab.terms
    active = {terms[t] for t in tokenize(doc.text) if t in terms}
    return FeatureVector(tuple(sorted(active)))


def load_corpus_jsonl(path: str | Path) -> list[Document]:
    """Read a JSON Lines corpus: one object per line with id, text, label."""
    docs: list[Document] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid JSON ({exc})") from exc
            try:
                doc = Document(id=str(obj["id"]), text=str(obj["text"]), label=obj["label"])
            except KeyError as exc:
                raise ValueError(f"{path}:{lineno}: missing field {exc}") from exc
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
            if doc.id in seen:
                raise ValueError(f"{path}:{lineno}: duplicate document id {doc.id!r}")
            seen.add(doc.id)
            docs.append(doc)
    return docs


def write_corpus_jsonl(path: str | Path, docs: Iterable[Document]) -> None:
    """Write documents as JSON Lines with fields id, text, label."""
    with open(path, "w", encoding="utf-8") as handle:
        for doc in docs:
            handle.write(json.dumps({"id": doc.id, "text": doc.text, "label": doc.label}))
            handle.write("\n")


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: one token per line, ``#`` lines are comments."""
    words = set()
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            token = line.strip()
            if token and not token.startswith("#"):
                words.add(token.lower())
    return frozenset(words)


def default_stopwords() -> frozenset[str]:
    """The stopword list bundled with the package."""
    text = resources.files("curvecast").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(
        token.lower()
        for token in (line.strip() for line in text.splitlines())
        if token and not token.startswith("#")
    )
