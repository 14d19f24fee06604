"""End-to-end pipeline: reviews in, topics/dictionary/report out.

Each stage writes its artifact in the line format owned by the stage's
module, so any prefix of the pipeline can be reproduced (and resumed) by
the matching CLI subcommands. A run manifest records the config echo and
per-stage counts; identical (config, seed) runs produce byte-identical
artifacts.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .clustering import ClusterParams, build_dictionary, recursive_cluster, write_topics
from .corpus import Corpus, filter_by_token_length, load_labeled, load_reviews, stratified_sample, write_reviews
from .embedding import EmbeddingStore, load_store, pca_project_2d, resolve_provider, write_store
from .errors import ConfigError, CorpusError, GatingError, ReviewscopeError, StageError
from .evaluation import (
    TrainConfig,
    VECTORIZER_MODES,
    run_benchmark,
    write_dictionary,
    write_report_csv,
)
from .keyphrase import Keyphrase, extract_keyphrases, load_keyphrases, write_keyphrases
from .sentiment import ScoredSentence, gate_sentences, parse_keep_set, resolve_scorer
from .textprep import DEFAULT_DELIMITERS, CleaningConfig, Sentence, clean_text, split_sentences

_BOOL_VALUES = {"on": True, "off": False, "true": True, "false": False}


@dataclass
class PipelineConfig:
    """Flat, serializable run configuration; see from_file for the format."""

    corpus: str = ""
    out_dir: str = ""
    provider: str = "test:0"
    scorer: str = ""
    keep: str = "all"
    min_tokens: int = 16
    max_tokens: int = 128
    sample_per_label: int = 0
    seed: int = 0
    k: int = 3
    max_n: int = 3
    delimiters: str = DEFAULT_DELIMITERS
    comma_split: bool = False
    contractions: str = ""  # path; empty selects the bundled table
    density_threshold: float = 0.7
    min_size: int = 5
    max_depth: int = 32
    split_arity: int = 2
    density_mode: str = "mean"
    eval_train: str = ""
    eval_test: str = ""
    modes: str = "one-hot,count,tfidf"
    learning_rate: float = 0.1
    epochs: int = 500
    l2: float = 1e-4

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        """Line-oriented ``key = value``; # comments and blank lines skipped."""
        values = parse_config_lines(Path(path).read_text(encoding="utf-8").splitlines(), str(path))
        return cls().with_overrides(values)

    def with_overrides(self, values: dict[str, str]) -> "PipelineConfig":
        """Apply string key/value overrides with per-field type coercion."""
        fields = {f.name: f.type for f in dataclasses.fields(self)}
        updates = {}
        for key, raw in values.items():
            if key not in fields:
                raise ConfigError(f"unknown config key {key!r}")
            current = getattr(self, key)
            if isinstance(current, bool):
                if raw.lower() not in _BOOL_VALUES:
                    raise ConfigError(f"{key}: expected on/off, got {raw!r}")
                updates[key] = _BOOL_VALUES[raw.lower()]
            elif isinstance(current, int):
                try:
                    updates[key] = int(raw)
                except ValueError:
                    raise ConfigError(f"{key}: expected an integer, got {raw!r}") from None
            elif isinstance(current, float):
                try:
                    updates[key] = float(raw)
                except ValueError:
                    raise ConfigError(f"{key}: expected a number, got {raw!r}") from None
            else:
                updates[key] = raw
        return dataclasses.replace(self, **updates)

    def cleaning_config(self) -> CleaningConfig:
        kwargs: dict = {"delimiters": self.delimiters, "comma_split": self.comma_split}
        if self.contractions:
            from .textprep import load_contractions

            kwargs["contractions"] = load_contractions(self.contractions)
        return CleaningConfig(**kwargs)

    def cluster_params(self) -> ClusterParams:
        try:
            return ClusterParams(
                density_threshold=self.density_threshold,
                min_size=self.min_size,
                max_depth=self.max_depth,
                split_arity=self.split_arity,
                density_mode=self.density_mode,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def train_config(self) -> TrainConfig:
        return TrainConfig(learning_rate=self.learning_rate, epochs=self.epochs, l2=self.l2, seed=self.seed)

    def mode_list(self) -> tuple[str, ...]:
        modes = tuple(m.strip() for m in self.modes.split(",") if m.strip())
        for mode in modes:
            if mode not in VECTORIZER_MODES:
                raise ConfigError(f"unknown vectorizer mode {mode!r}")
        if not modes:
            raise ConfigError("modes is empty")
        return modes

    def validate(self) -> None:
        """Check required fields, referenced paths, and parameter ranges."""
        if not self.corpus:
            raise ConfigError("corpus is required")
        if not self.out_dir:
            raise ConfigError("out_dir is required")
        if not self.scorer:
            raise ConfigError("scorer is required (lexicon:PATH | sidecar:PATH | remote:URL)")
        for name, value in (("corpus", self.corpus), ("eval_train", self.eval_train),
                            ("eval_test", self.eval_test), ("contractions", self.contractions)):
            if value and not Path(value).is_file():
                raise ConfigError(f"{name}: no such file: {value}")
        for spec_name, spec in (("scorer", self.scorer), ("provider", self.provider)):
            kind, sep, rest = spec.partition(":")
            if not sep or not rest:
                raise ConfigError(f"{spec_name}: expected kind:parameter, got {spec!r}")
            if kind in ("lexicon", "sidecar", "store") and not Path(rest).is_file():
                raise ConfigError(f"{spec_name}: no such file: {rest}")
        if bool(self.eval_train) != bool(self.eval_test):
            raise ConfigError("eval_train and eval_test must be set together")
        if self.min_tokens < 1 or self.min_tokens > self.max_tokens:
            raise ConfigError("need 1 <= min_tokens <= max_tokens")
        if self.sample_per_label < 0:
            raise ConfigError("sample_per_label must be >= 0")
        if self.k < 1 or self.max_n < 1:
            raise ConfigError("k and max_n must be >= 1")
        if self.epochs < 1 or self.learning_rate <= 0 or self.l2 < 0:
            raise ConfigError("bad training hyperparameters")
        self.cluster_params()
        self.mode_list()
        try:
            parse_keep_set(self.keep)
        except ReviewscopeError as exc:
            raise ConfigError(str(exc)) from None


def parse_config_lines(lines: Iterable[str], origin: str = "<config>") -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value'")
        values[key.strip()] = value.strip()
    return values


# ---------------------------------------------------------------------------
# stage helpers (shared by run_pipeline and the CLI subcommands)


def ingest_reviews(
    path: str | Path,
    min_tokens: int,
    max_tokens: int,
    sample_per_label: int = 0,
    seed: int = 0,
) -> tuple[Corpus, int, int]:
    """Load reviews, apply the token-length window, optionally subsample.

    Returns (corpus, loaded_count, skipped_count); loaded_count is the
    pre-filter size and skipped_count the malformed lines dropped.
    """
    corpus = load_reviews(path)
    loaded, skipped = len(corpus), corpus.skipped
    corpus = filter_by_token_length(corpus, min_tokens, max_tokens)
    if not len(corpus):
        raise CorpusError(f"no reviews within token bounds [{min_tokens}, {max_tokens}]")
    if sample_per_label:
        corpus = stratified_sample(corpus, sample_per_label, seed)
    return corpus, loaded, skipped


def split_corpus_sentences(corpus: Corpus, cleaning: CleaningConfig) -> list[Sentence]:
    sentences: list[Sentence] = []
    for doc in corpus.documents:
        sentences.extend(split_sentences(clean_text(doc.text, cleaning), doc.id, cleaning))
    return sentences


def write_sentences(sentences: Iterable[Sentence], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for s in sentences:
            fh.write(f"{s.review_id}\t{s.index}\t{s.text}\n")


def load_sentences(path: str | Path) -> list[Sentence]:
    """Read a sentences artifact; also accepts the scored 5-column layout."""
    sentences: list[Sentence] = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) == 3:
                review_id, index, text = parts
            elif len(parts) == 5:
                review_id, index, _, _, text = parts
            else:
                raise CorpusError(f"{path}:{lineno}: expected 3 or 5 tab-separated fields")
            sentences.append(Sentence.make(review_id, int(index), text))
    return sentences


def write_scored_sentences(scored: Iterable[ScoredSentence], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for item in scored:
            s = item.sentence
            fh.write(f"{s.review_id}\t{s.index}\t{item.score:.6f}\t{item.label.value}\t{s.text}\n")


def extract_all(sentences: Iterable[Sentence], provider, k: int, max_n: int) -> list[Keyphrase]:
    keyphrases: list[Keyphrase] = []
    for sentence in sentences:
        keyphrases.extend(extract_keyphrases(sentence, provider, k=k, max_n=max_n))
    return keyphrases


def distinct_phrases(keyphrases: Iterable[Keyphrase]) -> list[str]:
    """Phrase texts de-duplicated in first-appearance order."""
    seen: dict[str, None] = {}
    for kp in keyphrases:
        seen.setdefault(kp.text)
    return list(seen)


def store_from_phrases(phrases: Sequence[str], provider) -> EmbeddingStore:
    if not len(phrases):
        raise CorpusError("no phrases to embed")
    vectors = provider.embed(list(phrases))
    store = EmbeddingStore(dim=vectors.shape[1] if hasattr(vectors, "shape") else len(vectors[0]))
    for phrase, vec in zip(phrases, vectors):
        store.add(phrase, vec)
    return store


def emit_projection(vectors_path: str | Path, out_path: str | Path) -> int:
    """Write ``key,x,y`` rows (6 dp) for every store entry; returns row count."""
    store = load_store(vectors_path)
    keys = list(store.keys())
    coords = pca_project_2d([store.get(k) for k in keys])
    with Path(out_path).open("w", encoding="utf-8") as fh:
        fh.write("key,x,y\n")
        for key, (x, y) in zip(keys, coords):
            fh.write(f"{key},{x:.6f},{y:.6f}\n")
    return len(keys)


# ---------------------------------------------------------------------------
# the pipeline


@dataclass(frozen=True)
class PipelineResult:
    manifest: dict
    artifacts: dict


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    """Run every stage, writing artifacts and a manifest to out_dir.

    A stage failure raises StageError; artifacts written before the
    failure are left in place.
    """
    config.validate()
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    artifacts: dict[str, Path] = {}
    counts: dict[str, int] = {}
    cleaning = config.cleaning_config()

    def path_for(name: str, filename: str) -> Path:
        artifacts[name] = out_dir / filename
        return artifacts[name]

    try:
        corpus, loaded, skipped = ingest_reviews(
            config.corpus, config.min_tokens, config.max_tokens, config.sample_per_label, config.seed
        )
        counts["reviews_loaded"] = loaded
        counts["reviews_skipped"] = skipped
        counts["reviews_kept"] = len(corpus)
        write_reviews(corpus, path_for("reviews", "reviews.jsonl"))
    except ReviewscopeError as exc:
        raise StageError("ingest", str(exc)) from exc

    try:
        sentences = split_corpus_sentences(corpus, cleaning)
        if not sentences:
            raise CorpusError("no sentences produced")
        counts["sentences"] = len(sentences)
        write_sentences(sentences, path_for("sentences", "sentences.tsv"))
    except ReviewscopeError as exc:
        raise StageError("clean", str(exc)) from exc

    try:
        scorer = resolve_scorer(config.scorer)
        scored = gate_sentences(sentences, scorer, parse_keep_set(config.keep))
        counts["sentences_kept"] = len(scored)
        write_scored_sentences(scored, path_for("scored", "scored.tsv"))
        if not scored:
            raise GatingError("no sentences retained")
    except ReviewscopeError as exc:
        raise StageError("sentiment", str(exc)) from exc

    try:
        provider = resolve_provider(config.provider)
        keyphrases = extract_all((s.sentence for s in scored), provider, config.k, config.max_n)
        counts["keyphrases"] = len(keyphrases)
        write_keyphrases(keyphrases, path_for("keyphrases", "keyphrases.tsv"))
    except ReviewscopeError as exc:
        raise StageError("extract", str(exc)) from exc

    try:
        phrases = distinct_phrases(keyphrases)
        counts["distinct_phrases"] = len(phrases)
        store = store_from_phrases(phrases, provider)
        write_store(store, path_for("store", "phrases.embs"))
    except ReviewscopeError as exc:
        raise StageError("embed", str(exc)) from exc

    try:
        pairs = [(phrase, store.get(phrase)) for phrase in phrases]
        accepted, outliers = recursive_cluster(pairs, config.cluster_params())
        counts["clusters_accepted"] = len(accepted)
        counts["clusters_outlier"] = len(outliers)
        write_topics([*accepted, *outliers], path_for("topics", "topics.tsv"))
        dictionary = build_dictionary(accepted, source="pipeline")
        counts["dictionary_words"] = len(dictionary.words)
        write_dictionary(dictionary, path_for("dictionary", "dictionary.txt"))
    except ReviewscopeError as exc:
        raise StageError("cluster", str(exc)) from exc

    if config.eval_train:
        try:
            report = run_benchmark(
                load_labeled(config.eval_train),
                load_labeled(config.eval_test),
                [dictionary],
                modes=config.mode_list(),
                config=config.train_config(),
            )
            counts["benchmark_cells"] = len(report.cells)
            write_report_csv(report, path_for("report", "report.csv"))
        except ReviewscopeError as exc:
            raise StageError("evaluate", str(exc)) from exc

    try:
        counts["projected"] = emit_projection(artifacts["store"], path_for("projection", "projection.csv"))
    except ReviewscopeError as exc:
        raise StageError("project", str(exc)) from exc

    manifest = {
        "config": {f.name: getattr(config, f.name) for f in dataclasses.fields(config)},
        "counts": counts,
        "artifacts": {name: p.name for name, p in artifacts.items()},
        "seed": config.seed,
    }
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    artifacts["manifest"] = manifest_path
    return PipelineResult(manifest=manifest, artifacts=artifacts)


def phrases_from_keyphrase_file(path: str | Path) -> list[str]:
    """Distinct phrase texts from a keyphrases artifact, first-seen order."""
    return distinct_phrases(load_keyphrases(path))
