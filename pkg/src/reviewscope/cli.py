"""Command-line interface: each pipeline stage as a subcommand.

Exit codes: 0 success, 1 usage/config error, 2 stage failure. Running the
subcommands in sequence over the artifact files reproduces `pipeline`
exactly.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .clustering import accepted_topic_count, build_dictionary, load_topics, recursive_cluster, write_topics
from .corpus import load_labeled, load_reviews, write_reviews
from .embedding import resolve_provider, write_store
from .errors import ConfigError, ReviewscopeError, StageError
from .evaluation import TrainConfig, load_dictionary, run_benchmark, write_dictionary, write_report_csv
from .keyphrase import load_stopwords, ngram_baseline_extract, write_baseline_phrases, write_keyphrases
from .pipeline import (
    PipelineConfig,
    emit_projection,
    extract_all,
    ingest_reviews,
    load_sentences,
    parse_config_lines,
    phrases_from_keyphrase_file,
    run_pipeline,
    split_corpus_sentences,
    store_from_phrases,
    write_scored_sentences,
    write_sentences,
)
from .sentiment import gate_sentences, parse_keep_set, resolve_scorer
from .textprep import DEFAULT_DELIMITERS, CleaningConfig, load_contractions


class _Parser(argparse.ArgumentParser):
    """argparse, but usage problems exit 1 (2 is reserved for stage failures)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _cleaning_from_args(args) -> CleaningConfig:
    kwargs: dict = {"delimiters": args.delimiters, "comma_split": args.comma_split}
    if args.contractions:
        kwargs["contractions"] = load_contractions(args.contractions)
    return CleaningConfig(**kwargs)


def cmd_ingest(args) -> int:
    corpus, loaded, skipped = ingest_reviews(
        args.input, args.min_tokens, args.max_tokens, args.sample_per_label, args.seed
    )
    write_reviews(corpus, args.output)
    print(f"ingest: kept {len(corpus)}/{loaded} reviews ({skipped} malformed) -> {args.output}")
    return 0


def cmd_clean(args) -> int:
    corpus = load_reviews(args.input)
    sentences = split_corpus_sentences(corpus, _cleaning_from_args(args))
    write_sentences(sentences, args.output)
    print(f"clean: {len(sentences)} sentences from {len(corpus)} reviews -> {args.output}")
    return 0


def cmd_sentiment(args) -> int:
    sentences = load_sentences(args.input)
    scorer = resolve_scorer(args.scorer)
    scored = gate_sentences(sentences, scorer, parse_keep_set(args.keep))
    write_scored_sentences(scored, args.output)
    print(f"sentiment: retained {len(scored)}/{len(sentences)} sentences -> {args.output}")
    if not scored:
        raise StageError("sentiment", "no sentences retained")
    return 0


def cmd_extract(args) -> int:
    sentences = load_sentences(args.input)
    if args.method == "embedding":
        provider = resolve_provider(args.provider)
        keyphrases = extract_all(sentences, provider, args.k, args.max_n)
        write_keyphrases(keyphrases, args.output)
        print(f"extract: {len(keyphrases)} keyphrases from {len(sentences)} sentences -> {args.output}")
    else:
        stopwords = load_stopwords(args.stopwords)
        rows = [
            (s.review_id, s.index, phrase)
            for s in sentences
            for phrase in ngram_baseline_extract(s, stopwords, args.max_n)
        ]
        write_baseline_phrases(rows, args.output)
        print(f"extract: {len(rows)} n-gram phrases from {len(sentences)} sentences -> {args.output}")
    return 0


def cmd_cluster(args) -> int:
    phrases = phrases_from_keyphrase_file(args.input)
    provider = resolve_provider(args.provider)
    store = store_from_phrases(phrases, provider)
    if args.store:
        write_store(store, args.store)
    params = PipelineConfig(
        density_threshold=args.density_threshold,
        min_size=args.min_size,
        max_depth=args.max_depth,
        split_arity=args.split_arity,
        density_mode=args.density_mode,
    ).cluster_params()
    accepted, outliers = recursive_cluster([(p, store.get(p)) for p in phrases], params)
    write_topics([*accepted, *outliers], args.topics)
    dictionary = build_dictionary(accepted, source="pipeline")
    write_dictionary(dictionary, args.dictionary)
    print(
        f"cluster: {len(accepted)} accepted / {len(outliers)} outlier clusters over "
        f"{len(phrases)} phrases; dictionary of {len(dictionary.words)} words -> {args.dictionary}"
    )
    return 0


def _parse_dictionary_arg(value: str):
    name, sep, path = value.partition("=")
    if sep and name and "/" not in name:
        return name, path
    return None, value


def cmd_evaluate(args) -> int:
    dictionaries = []
    for value in args.dictionary:
        name, path = _parse_dictionary_arg(value)
        dictionaries.append(load_dictionary(path, source=name))
    if args.topics:
        if len(dictionaries) != 1:
            raise ConfigError("--topics requires exactly one --dictionary")
        count = accepted_topic_count(load_topics(args.topics))
        dictionaries[0] = dataclasses.replace(dictionaries[0], topic_count=count)
    modes = tuple(m.strip() for m in args.modes.split(",") if m.strip())
    report = run_benchmark(
        load_labeled(args.train),
        load_labeled(args.test),
        dictionaries,
        modes=modes,
        config=TrainConfig(learning_rate=args.learning_rate, epochs=args.epochs, l2=args.l2),
    )
    write_report_csv(report, args.output)
    print(f"evaluate: {len(report.cells)} benchmark cells -> {args.output}")
    return 0


def cmd_project(args) -> int:
    rows = emit_projection(args.store, args.output)
    print(f"project: {rows} coordinates -> {args.output}")
    return 0


def cmd_pipeline(args) -> int:
    config = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
    overrides: dict[str, str] = {}
    for flag in ("corpus", "out_dir", "provider", "scorer", "keep"):
        value = getattr(args, flag)
        if value is not None:
            overrides[flag] = value
    if args.seed is not None:
        overrides["seed"] = str(args.seed)
    for item in args.set or []:
        parsed = parse_config_lines([item], origin="--set")
        overrides.update(parsed)
    config = config.with_overrides(overrides)
    result = run_pipeline(config)
    counts = result.manifest["counts"]
    print(
        "pipeline: {reviews_kept} reviews, {sentences_kept} gated sentences, "
        "{distinct_phrases} phrases, {clusters_accepted} topics -> {out}".format(
            out=config.out_dir, **counts
        )
    )
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="reviewscope", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load, length-filter, and optionally subsample reviews")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--min-tokens", type=int, default=16)
    p.add_argument("--max-tokens", type=int, default=128)
    p.add_argument("--sample-per-label", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("clean", help="clean review text and split it into sentences")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--delimiters", default=DEFAULT_DELIMITERS)
    p.add_argument("--comma-split", action="store_true")
    p.add_argument("--contractions", default="")
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("sentiment", help="score sentences and gate them by sentiment class")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--scorer", required=True, help="lexicon:PATH | sidecar:PATH | remote:URL")
    p.add_argument("--keep", default="all", help="comma list of classes, or 'all'")
    p.set_defaults(func=cmd_sentiment)

    p = sub.add_parser("extract", help="extract keyphrases per sentence")
    p.add_argument("--input", required=True, help="sentences or scored-sentences file")
    p.add_argument("--output", required=True)
    p.add_argument("--method", choices=("embedding", "ngram"), default="embedding")
    p.add_argument("--provider", default="test:0", help="test:SEED[:DIM] | store:PATH | remote:URL")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--stopwords", default=None, help="stopword file for --method ngram")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("cluster", help="cluster keyphrases into topics and build the dictionary")
    p.add_argument("--input", required=True, help="keyphrases file")
    p.add_argument("--topics", required=True, help="topics output path")
    p.add_argument("--dictionary", required=True, help="dictionary output path")
    p.add_argument("--store", default="", help="also write the phrase embedding store here")
    p.add_argument("--provider", default="test:0")
    p.add_argument("--density-threshold", type=float, default=0.7)
    p.add_argument("--min-size", type=int, default=5)
    p.add_argument("--max-depth", type=int, default=32)
    p.add_argument("--split-arity", type=int, default=2)
    p.add_argument("--density-mode", choices=("mean", "min"), default="mean")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("evaluate", help="benchmark dictionaries as classification vocabularies")
    p.add_argument("--train", required=True, help="label<TAB>text training corpus")
    p.add_argument("--test", required=True, help="label<TAB>text test corpus")
    p.add_argument("--dictionary", action="append", required=True, help="[NAME=]PATH, repeatable")
    p.add_argument("--topics", default="", help="topics file supplying the topic count")
    p.add_argument("--modes", default="one-hot,count,tfidf")
    p.add_argument("--learning-rate", type=float, default=0.1)
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--l2", type=float, default=1e-4)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("pipeline", help="run every stage end-to-end")
    p.add_argument("--config", default="", help="key = value config file")
    p.add_argument("--corpus")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--provider")
    p.add_argument("--scorer")
    p.add_argument("--keep")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override any config key")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("project", help="write 2-D PCA coordinates for a vector store")
    p.add_argument("--store", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_project)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ReviewscopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
