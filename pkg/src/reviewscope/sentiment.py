"""Sentence sentiment scoring on a 1..5 scale and 3-way class gating.

Scores come from interchangeable bindings: a valence lexicon (desk-scale
stand-in for a learned regressor), a sidecar file of precomputed scores,
or a remote scoring service. Classes: score < 2 is negative, score > 4
is positive, everything in [2, 4] is neutral.
"""

from __future__ import annotations

import json
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import GatingError, SentimentError, TransportError
from .textprep import Sentence

SCORE_MIN = 1.0
SCORE_MAX = 5.0


class SentimentClass(str, Enum):
    NEGATIVE = "negative"
    NEUTRAL = "neutral"
    POSITIVE = "positive"


ALL_CLASSES = frozenset(SentimentClass)

# (upper bound, bound is inclusive, class); scores above the last bound
# take _FINAL_CLASS. The default three-way split: [1,2) [2,4] (4,5].
DEFAULT_CUTPOINTS = (
    (2.0, False, SentimentClass.NEGATIVE),
    (4.0, True, SentimentClass.NEUTRAL),
)
_FINAL_CLASS = SentimentClass.POSITIVE


def classify_sentiment(score: float, cutpoints=DEFAULT_CUTPOINTS, final=_FINAL_CLASS):
    """Map a 1..5 sentiment score to its class.

    Custom cutpoints (a finer resolution) are a sequence of
    ``(upper_bound, inclusive, class)`` triples in ascending bound order.
    """
    if not SCORE_MIN <= score <= SCORE_MAX:
        raise SentimentError(f"score {score} outside [1, 5]")
    for bound, inclusive, cls in cutpoints:
        if score < bound or (inclusive and score == bound):
            return cls
    return final


def load_lexicon(path: str | Path) -> dict[str, float]:
    """Read ``word<TAB>valence`` lines; valences must lie in [-1, 1]."""
    lexicon: dict[str, float] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        word, sep, raw = line.partition("\t")
        if not sep:
            raise SentimentError(f"{path}:{lineno}: expected 'word<TAB>valence'")
        try:
            valence = float(raw)
        except ValueError:
            raise SentimentError(f"{path}:{lineno}: bad valence {raw!r}") from None
        if not -1.0 <= valence <= 1.0:
            raise SentimentError(f"{path}:{lineno}: valence {valence} outside [-1, 1]")
        lexicon[word.strip().lower()] = valence
    return lexicon


def score_sentence_lexicon(sentence: Sentence, lexicon: Mapping[str, float]) -> float:
    """Affine-map the mean token valence onto the 1..5 scale (3 + 2v)."""
    valences = [lexicon[tok] for tok in sentence.tokens if tok in lexicon]
    mean = sum(valences) / len(valences) if valences else 0.0
    return min(SCORE_MAX, max(SCORE_MIN, 3.0 + 2.0 * mean))


def load_sidecar_scores(path: str | Path) -> dict[tuple[str, int], float]:
    """Read ``review_id<TAB>index<TAB>score`` lines, range-checking scores."""
    scores: dict[tuple[str, int], float] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise SentimentError(f"{path}:{lineno}: expected 3 tab-separated fields")
        review_id, raw_index, raw_score = parts
        try:
            index = int(raw_index)
            score = float(raw_score)
        except ValueError:
            raise SentimentError(f"{path}:{lineno}: bad index/score") from None
        if not SCORE_MIN <= score <= SCORE_MAX:
            raise SentimentError(f"{path}:{lineno}: score {score} outside [1, 5]")
        scores[(review_id, index)] = score
    return scores


class LexiconScorer:
    kind = "lexicon"

    def __init__(self, lexicon: Mapping[str, float]):
        self.lexicon = dict(lexicon)

    @classmethod
    def from_file(cls, path: str | Path) -> "LexiconScorer":
        return cls(load_lexicon(path))

    def score(self, sentence: Sentence) -> float:
        return score_sentence_lexicon(sentence, self.lexicon)


class SidecarScorer:
    kind = "sidecar-file"

    def __init__(self, scores: Mapping[tuple[str, int], float]):
        self.scores = dict(scores)

    @classmethod
    def from_file(cls, path: str | Path) -> "SidecarScorer":
        return cls(load_sidecar_scores(path))

    def score(self, sentence: Sentence) -> float:
        key = (sentence.review_id, sentence.index)
        try:
            return self.scores[key]
        except KeyError:
            raise GatingError(f"no sidecar score for {sentence.review_id}:{sentence.index}") from None


class RemoteScorer:
    """POST /score {"texts": [...]} -> {"scores": [...]} with retries."""

    kind = "remote"

    def __init__(self, url: str, retries: int = 3, backoff: float = 0.25, timeout: float = 10.0):
        self.url = url.rstrip("/")
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout

    def score(self, sentence: Sentence) -> float:
        return self.score_many([sentence.text])[0]

    def score_many(self, texts: Sequence[str]) -> list[float]:
        payload = _post_json(f"{self.url}/score", {"texts": list(texts)},
                             self.retries, self.backoff, self.timeout)
        scores = payload.get("scores")
        if not isinstance(scores, list) or len(scores) != len(texts):
            raise TransportError(f"{self.url}/score: malformed response")
        for s in scores:
            if not SCORE_MIN <= float(s) <= SCORE_MAX:
                raise SentimentError(f"remote score {s} outside [1, 5]")
        return [float(s) for s in scores]


def _post_json(url: str, body: dict, retries: int, backoff: float, timeout: float) -> dict:
    """POST JSON with bounded retries on transient failures (5xx, transport)."""
    data = json.dumps(body).encode("utf-8")
    last_error = ""
    for attempt in range(retries + 1):
        request = urllib.request.Request(
            url, data=data, headers={"Content-Type": "application/json"}, method="POST"
        )
        try:
            with urllib.request.urlopen(request, timeout=timeout) as response:
                return json.loads(response.read().decode("utf-8"))
        except urllib.error.HTTPError as exc:
            last_error = f"HTTP {exc.code}"
            if exc.code < 500:
                raise TransportError(f"{url}: {last_error}") from None
        except (urllib.error.URLError, TimeoutError, json.JSONDecodeError) as exc:
            last_error = str(exc)
        if attempt < retries:
            time.sleep(backoff * (2 ** attempt))
    raise TransportError(f"{url}: failed after {retries + 1} attempts ({last_error})")


def resolve_scorer(spec: str):
    """Map a scorer spec (``lexicon:PATH`` | ``sidecar:PATH`` | ``remote:URL``)."""
    kind, sep, rest = spec.partition(":")
    if not sep:
        raise SentimentError(f"bad scorer spec {spec!r}; expected kind:parameter")
    if kind == "lexicon":
        return LexiconScorer.from_file(rest)
    if kind == "sidecar":
        return SidecarScorer.from_file(rest)
    if kind == "remote":
        return RemoteScorer(rest)
    raise SentimentError(f"unknown scorer kind {kind!r}")


@dataclass(frozen=True)
class ScoredSentence:
    sentence: Sentence
    score: float
    label: SentimentClass


def parse_keep_set(value: str) -> frozenset[SentimentClass]:
    """Parse a comma-separated keep set, e.g. ``negative,positive`` or ``all``."""
    value = value.strip().lower()
    if value in ("all", "*"):
        return ALL_CLASSES
    if not value:
        return frozenset()
    try:
        return frozenset(SentimentClass(part.strip()) for part in value.split(",") if part.strip())
    except ValueError as exc:
        raise SentimentError(f"bad sentiment class in keep set {value!r}") from exc


def gate_sentences(
    sentences: Iterable[Sentence],
    scorer,
    keep: frozenset = ALL_CLASSES,
) -> list[ScoredSentence]:
    """Score every sentence and retain those whose class is in ``keep``."""
    kept: list[ScoredSentence] = []
    for sentence in sentences:
        score = scorer.score(sentence)
        label = classify_sentiment(score)
        if label in keep:
            kept.append(ScoredSentence(sentence=sentence, score=score, label=label))
    return kept
