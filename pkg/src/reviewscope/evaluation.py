"""Dictionary-filtered classification benchmark.

Documents are reduced to the words of a topic dictionary, vectorized
three ways (one-hot, count, TF-IDF), and classified with a from-scratch
logistic regression so that every weight stays inspectable. Each
dictionary × vectorizer cell reports accuracy alongside the dictionary's
topic count and vocabulary size.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import Corpus
from .errors import EvaluationError, ReviewscopeError, TrainingError

VECTORIZER_MODES = ("one-hot", "count", "tfidf")


@dataclass(frozen=True)
class TopicDictionary:
    words: tuple[str, ...]  # sorted, unique, lowercase
    topic_count: int
    source: str

    def __post_init__(self):
        if any((not w) or (w != w.lower()) for w in self.words):
            raise ValueError("dictionary words must be non-empty and lowercase")

    def __len__(self) -> int:
        return len(self.words)

    @property
    def word_set(self) -> frozenset[str]:
        return frozenset(self.words)


def load_dictionary(path: str | Path, source: str | None = None) -> TopicDictionary:
    """One word per line; lowercased, de-duplicated, sorted on load."""
    p = Path(path)
    words = sorted({line.strip().lower() for line in p.read_text("utf-8").splitlines() if line.strip()})
    return TopicDictionary(words=tuple(words), topic_count=0, source=source or p.stem)


def write_dictionary(dictionary: TopicDictionary, path: str | Path) -> None:
    Path(path).write_text("".join(f"{w}\n" for w in dictionary.words), encoding="utf-8")


def random_dictionary(pool: Iterable[str], size: int, seed: int, source: str = "random") -> TopicDictionary:
    """Uniform sample of `size` distinct words from the pool."""
    candidates = sorted(set(pool))
    if size > len(candidates):
        raise EvaluationError(f"cannot sample {size} words from a pool of {len(candidates)}")
    words = sorted(random.Random(seed).sample(candidates, size))
    return TopicDictionary(words=tuple(words), topic_count=0, source=source)


def filter_document(text: str, dictionary: TopicDictionary) -> str:
    """Keep only dictionary tokens, preserving order; may return ""."""
    keep = dictionary.word_set
    return " ".join(tok for tok in text.split() if tok in keep)


@dataclass(frozen=True)
class VectorizedDataset:
    matrix: np.ndarray  # documents x vocabulary
    labels: np.ndarray  # per-row index into label_names
    vocabulary: tuple[str, ...]
    label_names: tuple[str, ...]

    def __post_init__(self):
        if self.matrix.shape != (len(self.labels), len(self.vocabulary)):
            raise ValueError("matrix shape does not match labels/vocabulary")


def count_matrix(texts: Sequence[str], vocabulary: Sequence[str]) -> np.ndarray:
    column = {word: j for j, word in enumerate(vocabulary)}
    matrix = np.zeros((len(texts), len(vocabulary)), dtype=np.float64)
    for i, text in enumerate(texts):
        for token, count in Counter(text.split()).items():
            j = column.get(token)
            if j is not None:
                matrix[i, j] = count
    return matrix


def fit_idf(counts: np.ndarray) -> np.ndarray:
    """Smoothed idf from a count matrix: ln((1+N)/(1+df)) + 1."""
    n_docs = counts.shape[0]
    df = (counts > 0).sum(axis=0)
    return np.log((1.0 + n_docs) / (1.0 + df)) + 1.0


def _l2_normalize_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0  # zero rows stay zero
    return matrix / norms


def vectorize(
    texts: Sequence[str],
    vocabulary: Sequence[str],
    mode: str,
    idf: np.ndarray | None = None,
) -> np.ndarray:
    """Document-term matrix in the requested mode.

    For tfidf, pass the training idf to transform held-out text; when
    idf is None it is fit from `texts` themselves.
    """
    if not vocabulary:
        raise EvaluationError("vocabulary is empty")
    counts = count_matrix(texts, vocabulary)
    if mode == "count":
        return counts
    if mode == "one-hot":
        return (counts > 0).astype(np.float64)
    if mode == "tfidf":
        if idf is None:
            idf = fit_idf(counts)
        return _l2_normalize_rows(counts * idf)
    raise EvaluationError(f"unknown vectorizer mode {mode!r}")


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 500
    l2: float = 1e-4
    seed: int = 0


@dataclass(frozen=True)
class ClassifierModel:
    weights: np.ndarray  # classes x (features+1); binary = single row
    class_labels: tuple[str, ...]
    vocabulary: tuple[str, ...]
    loss_history: tuple[float, ...]


def _augment(matrix: np.ndarray) -> np.ndarray:
    return np.hstack([matrix, np.ones((matrix.shape[0], 1))])


def logistic_loss_and_grad(
    weights: np.ndarray,
    features: np.ndarray,
    labels: np.ndarray,
    l2: float,
) -> tuple[float, np.ndarray]:
    """Mean cross-entropy (+ L2 on non-bias weights) and its gradient.

    `features` must already carry the bias column; `weights` is 1 x (d+1)
    for the sigmoid model or C x (d+1) for softmax. Public so the
    gradient can be checked against finite differences.
    """
    n = features.shape[0]
    penalty = weights.copy()
    penalty[:, -1] = 0.0
    reg = 0.5 * l2 * float(np.sum(penalty * penalty))
    if weights.shape[0] == 1:
        z = features @ weights[0]
        y = labels.astype(np.float64)
        # log(1 + e^z) - y*z, stable for large |z|
        loss = float(np.mean(np.logaddexp(0.0, z) - y * z)) + reg
        p = 1.0 / (1.0 + np.exp(-z))
        grad = (features.T @ (p - y) / n)[None, :] + l2 * penalty
        return loss, grad
    scores = features @ weights.T
    shift = scores - scores.max(axis=1, keepdims=True)
    log_probs = shift - np.log(np.exp(shift).sum(axis=1, keepdims=True))
    loss = float(-np.mean(log_probs[np.arange(n), labels])) + reg
    probs = np.exp(log_probs)
    onehot = np.zeros_like(probs)
    onehot[np.arange(n), labels] = 1.0
    grad = (probs - onehot).T @ features / n + l2 * penalty
    return loss, grad


def train_classifier(train: VectorizedDataset, config: TrainConfig = TrainConfig()) -> ClassifierModel:
    """Full-batch gradient descent from zero weights; deterministic."""
    present = np.unique(train.labels)
    if present.size < 2:
        raise TrainingError("training set has a single class")
    n_classes = len(train.label_names)
    features = _augment(train.matrix)
    rows = 1 if n_classes == 2 else n_classes
    weights = np.zeros((rows, features.shape[1]))
    history = []
    for _ in range(config.epochs):
        loss, grad = logistic_loss_and_grad(weights, features, train.labels, config.l2)
        history.append(loss)
        weights = weights - config.learning_rate * grad
    return ClassifierModel(
        weights=weights,
        class_labels=train.label_names,
        vocabulary=train.vocabulary,
        loss_history=tuple(history),
    )


def predict(model: ClassifierModel, matrix: np.ndarray) -> np.ndarray:
    """Argmax class index per row; ties go to the lowest class index."""
    features = _augment(matrix)
    if model.weights.shape[0] == 1:
        return (features @ model.weights[0] > 0.0).astype(np.int64)
    return np.argmax(features @ model.weights.T, axis=1).astype(np.int64)


def evaluate_accuracy(model: ClassifierModel, test: VectorizedDataset) -> float:
    if tuple(test.vocabulary) != tuple(model.vocabulary):
        raise EvaluationError("test vocabulary differs from training vocabulary")
    if tuple(test.label_names) != tuple(model.class_labels):
        raise EvaluationError("test label set differs from training label set")
    if test.matrix.shape[0] == 0:
        raise EvaluationError("empty test set")
    return float(np.mean(predict(model, test.matrix) == test.labels))


@dataclass(frozen=True)
class BenchmarkCell:
    method: str
    vectorizer: str
    topic_count: int
    vocabulary_size: int
    accuracy: float | None  # None = failed cell (degenerate dictionary)


@dataclass(frozen=True)
class BenchmarkReport:
    cells: tuple[BenchmarkCell, ...]

    def as_table(self) -> list[dict[str, object]]:
        return [
            {
                "Method": c.method,
                "Vectorizing method": c.vectorizer,
                "Topic number": c.topic_count,
                "Vocabulary size": c.vocabulary_size,
                "Accuracy": c.accuracy,
            }
            for c in self.cells
        ]


def run_benchmark(
    corpus_train: Corpus,
    corpus_test: Corpus,
    dictionaries: Sequence[TopicDictionary],
    modes: Sequence[str] = VECTORIZER_MODES,
    config: TrainConfig = TrainConfig(),
) -> BenchmarkReport:
    """One cell per dictionary x mode; degenerate cells fail in isolation."""
    for mode in modes:
        if mode not in VECTORIZER_MODES:
            raise EvaluationError(f"unknown vectorizer mode {mode!r}")
    train_docs = list(corpus_train)
    test_docs = list(corpus_test)
    if sorted(set(corpus_train.label_set)) != sorted(set(corpus_test.label_set)):
        raise EvaluationError("train and test corpora have different label sets")
    label_names = tuple(corpus_train.label_set)
    label_index = {label: i for i, label in enumerate(label_names)}
    train_labels = np.array([label_index[d.label] for d in train_docs], dtype=np.int64)
    test_labels = np.array([label_index[d.label] for d in test_docs], dtype=np.int64)
    observed = {tok for d in train_docs for tok in d.text.split()}

    cells: list[BenchmarkCell] = []
    for dictionary in dictionaries:
        vocabulary = tuple(w for w in dictionary.words if w in observed)
        filtered_train = [filter_document(d.text, dictionary) for d in train_docs]
        filtered_test = [filter_document(d.text, dictionary) for d in test_docs]
        degenerate = not vocabulary or all(not t for t in filtered_train)
        for mode in modes:
            accuracy: float | None = None
            if not degenerate:
                try:
                    train_counts = count_matrix(filtered_train, vocabulary)
                    idf = fit_idf(train_counts) if mode == "tfidf" else None
                    train_set = VectorizedDataset(
                        matrix=vectorize(filtered_train, vocabulary, mode, idf),
                        labels=train_labels,
                        vocabulary=vocabulary,
                        label_names=label_names,
                    )
                    test_set = VectorizedDataset(
                        matrix=vectorize(filtered_test, vocabulary, mode, idf),
                        labels=test_labels,
                        vocabulary=vocabulary,
                        label_names=label_names,
                    )
                    model = train_classifier(train_set, config)
                    accuracy = evaluate_accuracy(model, test_set)
                except ReviewscopeError:
                    accuracy = None
            cells.append(
                BenchmarkCell(
                    method=dictionary.source,
                    vectorizer=mode,
                    topic_count=dictionary.topic_count,
                    vocabulary_size=len(dictionary.words),
                    accuracy=accuracy,
                )
            )
    return BenchmarkReport(cells=tuple(cells))


def write_report_csv(report: BenchmarkReport, path: str | Path) -> None:
    """CSV: method,vectorizer,topic_count,vocabulary_size,accuracy (4 dp)."""
    lines = ["method,vectorizer,topic_count,vocabulary_size,accuracy"]
    for c in report.cells:
        acc = "" if c.accuracy is None else f"{c.accuracy:.4f}"
        lines.append(f"{c.method},{c.vectorizer},{c.topic_count},{c.vocabulary_size},{acc}")
    Path(path).write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
