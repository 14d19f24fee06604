"""Keyphrase extraction: embedding-ranked n-grams plus a stopword-run baseline.

Every contiguous 1–3-gram of a sentence competes as a candidate; the top 3
by cosine similarity to the whole-sentence embedding win. The baseline
extractor skips embeddings entirely and just enumerates n-grams of the
stopword-free token runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .embedding import cosine_similarity
from .errors import CandidateError
from .textprep import Sentence

MAX_NGRAM = 3
DEFAULT_TOP_K = 3


@dataclass(frozen=True)
class Keyphrase:
    review_id: str
    sentence_index: int
    text: str
    n: int
    similarity: float


def _candidate_runs(tokens: Sequence[str], max_n: int) -> Iterator[tuple[int, int, str]]:
    """Yield (n, position, phrase) for every contiguous n-gram, n-major."""
    for n in range(1, min(max_n, len(tokens)) + 1):
        for pos in range(len(tokens) - n + 1):
            yield n, pos, " ".join(tokens[pos : pos + n])


def generate_candidates(tokens: Sequence[str], max_n: int = MAX_NGRAM) -> list[str]:
    """All contiguous n-grams for n = 1..min(max_n, len), in (n, position) order."""
    if not tokens:
        raise CandidateError("cannot generate candidates from an empty token list")
    if max_n < 1:
        raise CandidateError(f"max_n must be >= 1, got {max_n}")
    return [text for _, _, text in _candidate_runs(tokens, max_n)]


def extract_keyphrases(
    sentence: Sentence,
    provider,
    k: int = DEFAULT_TOP_K,
    max_n: int = MAX_NGRAM,
) -> list[Keyphrase]:
    """Top-k candidates by cosine similarity to the sentence embedding.

    Candidates are de-duplicated by text before embedding (first
    occurrence wins the position). Ties break by smaller n, then earlier
    position, then lexicographic text.
    """
    if k < 1:
        raise CandidateError(f"k must be >= 1, got {k}")
    if not sentence.tokens:
        raise CandidateError(f"sentence {sentence.review_id}:{sentence.index} has no tokens")
    first_seen: dict[str, tuple[int, int]] = {}
    for n, pos, text in _candidate_runs(sentence.tokens, max_n):
        first_seen.setdefault(text, (n, pos))
    candidates = list(first_seen)
    vectors = provider.embed([sentence.text] + candidates)
    sentence_vec = vectors[0]
    scored = [
        (cosine_similarity(vectors[i + 1], sentence_vec), text)
        for i, text in enumerate(candidates)
    ]
    scored.sort(key=lambda item: (-item[0], *first_seen[item[1]], item[1]))
    return [
        Keyphrase(
            review_id=sentence.review_id,
            sentence_index=sentence.index,
            text=text,
            n=first_seen[text][0],
            similarity=sim,
        )
        for sim, text in scored[:k]
    ]


def ngram_baseline_extract(
    sentence: Sentence,
    stopwords: frozenset[str] | set[str],
    max_n: int = MAX_NGRAM,
) -> list[str]:
    """N-grams of the maximal stopword-free token runs, run-major."""
    runs: list[list[str]] = []
    current: list[str] = []
    for token in sentence.tokens:
        if token in stopwords:
            if current:
                runs.append(current)
                current = []
        else:
            current.append(token)
    if current:
        runs.append(current)
    phrases: list[str] = []
    for run in runs:
        phrases.extend(text for _, _, text in _candidate_runs(run, max_n))
    return phrases


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """One lowercase word per line; blank lines and # comments skipped."""
    if path is None:
        text = resources.files("reviewscope.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    words = (line.strip() for line in text.splitlines())
    return frozenset(w.lower() for w in words if w and not w.startswith("#"))


def write_keyphrases(keyphrases: Iterable[Keyphrase], path: str | Path) -> None:
    """TSV lines: review_id, sentence_index, phrase, n, similarity (6 dp)."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for kp in keyphrases:
            fh.write(f"{kp.review_id}\t{kp.sentence_index}\t{kp.text}\t{kp.n}\t{kp.similarity:.6f}\n")


def load_keyphrases(path: str | Path) -> list[Keyphrase]:
    out: list[Keyphrase] = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise CandidateError(f"{path}:{lineno}: expected 5 tab-separated fields")
            review_id, index, text, n, sim = parts
            out.append(Keyphrase(review_id, int(index), text, int(n), float(sim)))
    return out


def write_baseline_phrases(
    rows: Iterable[tuple[str, int, str]], path: str | Path
) -> None:
    """TSV lines for the baseline extractor: review_id, sentence_index, phrase, n."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for review_id, sentence_index, text in rows:
            fh.write(f"{review_id}\t{sentence_index}\t{text}\t{len(text.split())}\n")
