"""Load, filter, sample, and serialize review and labeled corpora.

Input formats:
  * review-lines: UTF-8, one JSON record per line with fields
    ``reviewText`` (string), ``overall`` (number), ``asin`` (string);
    unknown fields are ignored. Our serializer also writes an ``id``
    field, which the loader honors when present.
  * labeled: UTF-8 lines ``label<TAB>text``.
"""

from __future__ import annotations

import json
import logging
import math
import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Union

from .errors import CorpusError, SamplingError
from .tokenizers import word_tokenize

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Review:
    id: str
    product_id: str
    rating: int  # 1..5
    text: str

    @property
    def label(self) -> str:
        return str(self.rating)


@dataclass(frozen=True)
class LabeledDocument:
    id: str
    label: str
    text: str


Document = Union[Review, LabeledDocument]


@dataclass
class Corpus:
    """Ordered document collection with its declared label set.

    ``skipped`` counts malformed input lines dropped at load time; it is
    metadata, not part of the corpus contents.
    """

    documents: list = field(default_factory=list)
    label_set: list = field(default_factory=list)
    skipped: int = 0

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def load_reviews(path: str | Path) -> Corpus:
    """Load a review-lines file; malformed lines are skipped and counted."""
    path = Path(path)
    documents: list[Review] = []
    skipped = 0
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                text = str(record["reviewText"]).strip()
                overall = float(record["overall"])
                asin = str(record["asin"])
                if not text:
                    raise ValueError("empty review text")
                rating = _round_half_up(overall)
                if not 1 <= rating <= 5:
                    raise ValueError(f"rating {overall} outside 1..5")
            except (KeyError, TypeError, ValueError) as exc:
                skipped += 1
                log.warning("%s:%d: skipping malformed record (%s)", path, lineno, exc)
                continue
            rid = str(record["id"]) if "id" in record else f"r{len(documents) + 1}"
            documents.append(Review(id=rid, product_id=asin, rating=rating, text=text))
    if not documents:
        raise CorpusError(f"{path}: no records")
    label_set = sorted({d.label for d in documents})
    return Corpus(documents=documents, label_set=label_set, skipped=skipped)


def write_reviews(corpus: Corpus, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            rec = {
                "id": doc.id,
                "reviewText": doc.text,
                "overall": doc.rating,
                "asin": doc.product_id,
            }
            fh.write(json.dumps(rec, ensure_ascii=False, separators=(",", ":")) + "\n")


def load_labeled(path: str | Path) -> Corpus:
    """Load a ``label<TAB>text`` corpus; label set keeps appearance order."""
    path = Path(path)
    documents: list[LabeledDocument] = []
    label_set: list[str] = []
    skipped = 0
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            label, sep, text = line.partition("\t")
            if not sep or not label.strip() or not text.strip():
                skipped += 1
                log.warning("%s:%d: skipping malformed labeled line", path, lineno)
                continue
            label = label.strip()
            documents.append(LabeledDocument(id=f"d{len(documents) + 1}", label=label, text=text.strip()))
            if label not in label_set:
                label_set.append(label)
    if not documents:
        raise CorpusError(f"{path}: no records")
    return Corpus(documents=documents, label_set=label_set, skipped=skipped)


def write_labeled(corpus: Corpus, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            fh.write(f"{doc.label}\t{doc.text}\n")


def document_label(doc: Document) -> str:
    return doc.label


def filter_by_token_length(
    corpus: Corpus,
    min_tokens: int = 16,
    max_tokens: int = 128,
    tokenizer: Callable[[str], list] = word_tokenize,
) -> Corpus:
    """Keep documents whose token count is within [min_tokens, max_tokens].

    Bounds are inclusive. Order is preserved; may return an empty corpus.
    """
    if min_tokens < 1:
        raise ValueError("min_tokens must be >= 1")
    if min_tokens > max_tokens:
        raise ValueError("min_tokens must be <= max_tokens")
    kept = [d for d in corpus.documents if min_tokens <= len(tokenizer(d.text)) <= max_tokens]
    return replace(corpus, documents=kept, skipped=0)


def stratified_sample(corpus: Corpus, per_label: int, seed: int) -> Corpus:
    """Draw exactly ``per_label`` documents per label with a seeded RNG.

    Selected documents keep their original relative order, so a fixed
    (corpus, per_label, seed) triple reproduces the same output.
    """
    if per_label < 1:
        raise ValueError("per_label must be >= 1")
    by_label: dict[str, list[int]] = {label: [] for label in corpus.label_set}
    for idx, doc in enumerate(corpus.documents):
        by_label[document_label(doc)].append(idx)
    for label in corpus.label_set:
        if len(by_label[label]) < per_label:
            raise SamplingError(
                f"label {label!r} has {len(by_label[label])} documents, need {per_label}"
            )
    rng = random.Random(seed)
    chosen: list[int] = []
    for label in corpus.label_set:
        chosen.extend(rng.sample(by_label[label], per_label))
    chosen.sort()
    return replace(corpus, documents=[corpus.documents[i] for i in chosen], skipped=0)
