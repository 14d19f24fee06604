"""Planted-topic corpora: synthetic benchmarks with known ground truth.

Documents are generated from disjoint per-topic word sets plus a shared
noise vocabulary. Paired with an anchored test embedder (same-topic words
near-parallel), the full extract → cluster → dictionary → classify chain
can be scored against the planted words: dictionary coverage, and
classification accuracy against size-matched random dictionaries.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from statistics import mean

from .clustering import ClusterParams, build_dictionary, recursive_cluster
from .corpus import Corpus, LabeledDocument
from .embedding import TestEmbedder
from .evaluation import TrainConfig, random_dictionary, run_benchmark
from .keyphrase import extract_keyphrases
from .textprep import Sentence


@dataclass(frozen=True)
class PlantedCorpus:
    corpus: Corpus
    sentences: tuple[Sentence, ...]
    topic_words: dict[str, tuple[str, ...]]
    noise_words: tuple[str, ...]

    @property
    def anchors(self) -> dict[str, str]:
        """Token → topic-label map for anchoring a test embedder."""
        return {w: label for label, words in self.topic_words.items() for w in words}

    @property
    def planted_words(self) -> frozenset[str]:
        return frozenset(w for words in self.topic_words.values() for w in words)


def make_planted_corpus(
    n_topics: int = 6,
    words_per_topic: int = 16,
    docs_per_topic: int = 100,
    sentences_per_doc: int = 1,
    tokens_per_sentence: int = 10,
    topic_fraction: float = 0.8,
    noise_vocab_size: int = 800,
    seed: int = 0,
) -> PlantedCorpus:
    """Generate labeled documents whose tokens mix topic and noise words.

    Each token is drawn from the document's topic word set with
    probability ``topic_fraction``, otherwise from the shared noise
    vocabulary. Texts come out already clean (lowercase, space-joined).

    Default sizing: a mixed n-gram containing a sentence's own noise
    token outranks pure candidates once the sentence has fewer than ~5
    topic tokens, so sentences are long and topic-heavy (10 tokens at
    0.8) to keep extraction precise, while one sentence per document
    keeps per-document topic variety low enough that a partial random
    dictionary loses real accuracy.
    """
    if n_topics < 2:
        raise ValueError("need at least 2 topics")
    if not 0.0 < topic_fraction < 1.0:
        raise ValueError("topic_fraction must be in (0, 1)")
    rng = random.Random(seed)
    labels = [f"topic{i}" for i in range(n_topics)]
    topic_words = {
        label: tuple(f"t{i}w{j}" for j in range(words_per_topic))
        for i, label in enumerate(labels)
    }
    noise = tuple(f"noise{k}" for k in range(noise_vocab_size))

    documents: list[LabeledDocument] = []
    sentences: list[Sentence] = []
    for label in labels:
        for _ in range(docs_per_topic):
            doc_id = f"d{len(documents) + 1}"
            doc_tokens: list[str] = []
            for s in range(sentences_per_doc):
                tokens = [
                    rng.choice(topic_words[label]) if rng.random() < topic_fraction else rng.choice(noise)
                    for _ in range(tokens_per_sentence)
                ]
                sentences.append(Sentence.make(doc_id, s, " ".join(tokens)))
                doc_tokens.extend(tokens)
            documents.append(LabeledDocument(id=doc_id, label=label, text=" ".join(doc_tokens)))
    corpus = Corpus(documents=documents, label_set=list(labels), skipped=0)
    return PlantedCorpus(
        corpus=corpus,
        sentences=tuple(sentences),
        topic_words=topic_words,
        noise_words=noise,
    )


def split_half(corpus: Corpus) -> tuple[Corpus, Corpus]:
    """Deterministic stratified 50/50 split (alternating within each label)."""
    seen: dict[str, int] = {}
    train: list[LabeledDocument] = []
    test: list[LabeledDocument] = []
    for doc in corpus.documents:
        k = seen.get(doc.label, 0)
        seen[doc.label] = k + 1
        (train if k % 2 == 0 else test).append(doc)
    return (
        Corpus(documents=train, label_set=list(corpus.label_set), skipped=0),
        Corpus(documents=test, label_set=list(corpus.label_set), skipped=0),
    )


@dataclass(frozen=True)
class PlantedResult:
    coverage: float  # planted words recovered by the dictionary
    dictionary_size: int
    topic_count: int
    pipeline_accuracy: float
    random_accuracies: tuple[float, ...]

    @property
    def margin(self) -> float:
        return self.pipeline_accuracy - mean(self.random_accuracies)


def run_planted_experiment(
    seed: int = 0,
    random_seeds: tuple[int, ...] = (101, 102, 103, 104, 105),
    dim: int = 768,
    anchor_strength: float = 0.95,
    params: ClusterParams = ClusterParams(),
    mode: str = "tfidf",
    train_config: TrainConfig = TrainConfig(),
    **generator_overrides,
) -> PlantedResult:
    """End-to-end planted-topic run.

    Builds the corpus, extracts keyphrases from the training half with an
    anchored test embedder, clusters them into a topic dictionary, and
    benchmarks that dictionary against size-matched random dictionaries
    (one per entry in ``random_seeds``).
    """
    planted = make_planted_corpus(seed=seed, **generator_overrides)
    train, test = split_half(planted.corpus)
    embedder = TestEmbedder(dim=dim, seed=seed, anchors=planted.anchors, anchor_strength=anchor_strength)

    train_ids = {doc.id for doc in train.documents}
    phrase_order: dict[str, None] = {}
    for sentence in planted.sentences:
        if sentence.review_id not in train_ids:
            continue
        for kp in extract_keyphrases(sentence, embedder):
            phrase_order.setdefault(kp.text)
    phrases = list(phrase_order)
    vectors = embedder.embed(phrases)
    accepted, _ = recursive_cluster([(p, vectors[i]) for i, p in enumerate(phrases)], params)
    dictionary = build_dictionary(accepted, source="pipeline")

    planted_words = planted.planted_words
    coverage = len(planted_words & set(dictionary.words)) / len(planted_words)

    pool = {tok for doc in train.documents for tok in doc.text.split()}
    size = min(len(dictionary.words), len(pool))
    rivals = [random_dictionary(pool, size, s, source=f"random-{s}") for s in random_seeds]
    report = run_benchmark(train, test, [dictionary, *rivals], modes=(mode,), config=train_config)

    pipeline_cell = report.cells[0]
    if pipeline_cell.accuracy is None:
        raise RuntimeError("pipeline dictionary produced a degenerate benchmark cell")
    random_accuracies = tuple(c.accuracy for c in report.cells[1:] if c.accuracy is not None)
    if len(random_accuracies) != len(rivals):
        raise RuntimeError("a random dictionary produced a degenerate benchmark cell")
    return PlantedResult(
        coverage=coverage,
        dictionary_size=len(dictionary.words),
        topic_count=dictionary.topic_count,
        pipeline_accuracy=pipeline_cell.accuracy,
        random_accuracies=random_accuracies,
    )
