#!/usr/bin/env python3
"""Vectorizer grid on a planted corpus: one-hot vs count vs TF-IDF.

Builds one synthetic corpus, extracts a topic dictionary through the
pipeline (anchored test embedder, so no model download), then scores that
dictionary against size-matched random dictionaries under every
vectorizer mode. Prints the full method x vectorizer table.

    python3 scripts/vectorizer_benchmark.py --seed 0 --random-dicts 3
"""

from __future__ import annotations

import argparse
import sys

from reviewscope.clustering import ClusterParams, build_dictionary, recursive_cluster
from reviewscope.embedding import TestEmbedder
from reviewscope.evaluation import random_dictionary, run_benchmark, write_report_csv
from reviewscope.keyphrase import extract_keyphrases
from reviewscope.synthetic import make_planted_corpus, split_half


def build_pipeline_dictionary(planted, train, dim, seed):
    """Keyphrases from the training half, clustered into a dictionary."""
    embedder = TestEmbedder(dim=dim, seed=seed, anchors=planted.anchors, anchor_strength=0.95)
    train_ids = {doc.id for doc in train.documents}
    phrase_order = {}
    for sentence in planted.sentences:
        if sentence.review_id not in train_ids:
            continue
        for kp in extract_keyphrases(sentence, embedder):
            phrase_order.setdefault(kp.text)
    phrases = list(phrase_order)
    vectors = embedder.embed(phrases)
    accepted, _ = recursive_cluster(list(zip(phrases, vectors)), ClusterParams())
    return build_dictionary(accepted, source="pipeline")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=768)
    p.add_argument("--random-dicts", type=int, default=3, help="size-matched random baselines")
    p.add_argument("--csv", help="write the full report to this file")
    args = p.parse_args(argv)

    planted = make_planted_corpus(seed=args.seed)
    train, test = split_half(planted.corpus)
    dictionary = build_pipeline_dictionary(planted, train, args.dim, args.seed)
    recovered = len(planted.planted_words & set(dictionary.words))
    print(
        f"dictionary: {len(dictionary.words)} words in {dictionary.topic_count} topics,"
        f" {recovered}/{len(planted.planted_words)} planted words recovered"
    )

    pool = {tok for doc in train.documents for tok in doc.text.split()}
    size = min(len(dictionary.words), len(pool))
    rivals = [
        random_dictionary(pool, size, 100 + i, source=f"random-{100 + i}")
        for i in range(args.random_dicts)
    ]
    report = run_benchmark(train, test, [dictionary, *rivals])

    def fmt(header, value):
        if value is None:
            return ""
        return f"{value:.4f}" if header == "Accuracy" else str(value)

    table = report.as_table()
    headers = list(table[0])
    widths = [max(len(h), max(len(fmt(h, r[h])) for r in table)) for h in headers]
    print("  ".join(h.ljust(w) for h, w in zip(headers, widths)))
    for row in table:
        print("  ".join(fmt(h, row[h]).ljust(w) for h, w in zip(headers, widths)))

    if args.csv:
        write_report_csv(report, args.csv)
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
