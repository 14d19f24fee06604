import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from reviewscope.corpus import (
    Corpus,
    LabeledDocument,
    Review,
    filter_by_token_length,
    load_labeled,
    load_reviews,
    stratified_sample,
    write_labeled,
    write_reviews,
)
from reviewscope.errors import CorpusError, SamplingError


def test_load_reviews_roundtrip(tmp_path):
    path = tmp_path / "reviews.jsonl"
    records = [
        {"reviewText": "Solid build and fast shipping.", "overall": 5, "asin": "B01"},
        {"reviewText": "Died after a week.", "overall": 1, "asin": "B02"},
        {"reviewText": "It's okay, nothing special.", "overall": 3.4, "asin": "B01"},
    ]
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")

    corpus = load_reviews(path)
    assert len(corpus) == 3
    assert corpus.skipped == 0
    assert [d.rating for d in corpus] == [5, 1, 3]
    assert [d.id for d in corpus] == ["r1", "r2", "r3"]
    assert corpus.label_set == ["1", "3", "5"]

    out = tmp_path / "copy.jsonl"
    write_reviews(corpus, out)
    again = load_reviews(out)
    assert again.documents == corpus.documents


def test_load_reviews_skips_malformed(tmp_path):
    path = tmp_path / "reviews.jsonl"
    lines = [
        '{"reviewText": "fine product works well", "overall": 4, "asin": "B01"}',
        "not json at all",
        '{"reviewText": "", "overall": 4, "asin": "B02"}',
        '{"overall": 4, "asin": "B03"}',
        '{"reviewText": "rating out of range", "overall": 9, "asin": "B04"}',
        "",
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    corpus = load_reviews(path)
    assert len(corpus) == 1
    assert corpus.skipped == 4


def test_load_reviews_ratings_round_half_up(tmp_path):
    path = tmp_path / "reviews.jsonl"
    rows = [(1.4, 1), (1.5, 2), (2.5, 3), (4.5, 5), (4.49, 4)]
    path.write_text(
        "\n".join(
            json.dumps({"reviewText": "text here", "overall": o, "asin": "B"})
            for o, _ in rows
        ),
        encoding="utf-8",
    )
    corpus = load_reviews(path)
    assert [d.rating for d in corpus] == [want for _, want in rows]


def test_load_reviews_empty_file_errors(tmp_path):
    path = tmp_path / "reviews.jsonl"
    path.write_text("\n\n", encoding="utf-8")
    with pytest.raises(CorpusError):
        load_reviews(path)


def test_load_labeled_keeps_appearance_order(tmp_path):
    path = tmp_path / "docs.tsv"
    path.write_text("pos\tgood one\nneg\tbad one\npos\tanother\n", encoding="utf-8")
    corpus = load_labeled(path)
    assert corpus.label_set == ["pos", "neg"]
    assert [d.id for d in corpus] == ["d1", "d2", "d3"]

    out = tmp_path / "out.tsv"
    write_labeled(corpus, out)
    assert load_labeled(out).documents == corpus.documents


def _corpus_of(texts):
    docs = [LabeledDocument(id=f"d{i}", label="x", text=t) for i, t in enumerate(texts, 1)]
    return Corpus(documents=docs, label_set=["x"])


def test_filter_by_token_length_inclusive_bounds():
    corpus = _corpus_of(["one two three", "one two", "a b c d"])
    kept = filter_by_token_length(corpus, min_tokens=3, max_tokens=4)
    assert [d.text for d in kept] == ["one two three", "a b c d"]
    # boundaries themselves are kept
    assert len(filter_by_token_length(corpus, 2, 2)) == 1


def test_filter_rejects_bad_bounds():
    corpus = _corpus_of(["a b"])
    with pytest.raises(ValueError):
        filter_by_token_length(corpus, min_tokens=0)
    with pytest.raises(ValueError):
        filter_by_token_length(corpus, min_tokens=5, max_tokens=4)


@given(st.integers(0, 2**32 - 1))
def test_stratified_sample_deterministic_and_balanced(seed):
    docs = [
        Review(id=f"r{i}", product_id="p", rating=(i % 3) + 1, text=f"text {i}")
        for i in range(30)
    ]
    corpus = Corpus(documents=docs, label_set=["1", "2", "3"])
    first = stratified_sample(corpus, per_label=4, seed=seed)
    second = stratified_sample(corpus, per_label=4, seed=seed)
    assert first.documents == second.documents
    labels = [d.label for d in first]
    assert all(labels.count(lbl) == 4 for lbl in corpus.label_set)
    # original relative order is preserved
    indices = [docs.index(d) for d in first.documents]
    assert indices == sorted(indices)


def test_stratified_sample_insufficient_label():
    docs = [Review(id="r1", product_id="p", rating=2, text="only one")]
    corpus = Corpus(documents=docs, label_set=["2"])
    with pytest.raises(SamplingError):
        stratified_sample(corpus, per_label=2, seed=0)
