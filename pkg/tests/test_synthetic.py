from collections import Counter

from reviewscope.synthetic import make_planted_corpus, split_half


def test_planted_corpus_shape():
    planted = make_planted_corpus(
        n_topics=3, words_per_topic=4, docs_per_topic=10,
        sentences_per_doc=2, tokens_per_sentence=6, noise_vocab_size=20, seed=1,
    )
    assert len(planted.corpus) == 30
    assert planted.corpus.label_set == ["topic0", "topic1", "topic2"]
    assert len(planted.sentences) == 60
    assert len(planted.planted_words) == 12
    assert len(planted.noise_words) == 20
    # word sets are disjoint between topics and from the noise pool
    assert planted.planted_words.isdisjoint(planted.noise_words)
    assert len(planted.anchors) == 12

    by_label = Counter(doc.label for doc in planted.corpus)
    assert set(by_label.values()) == {10}
    for doc in planted.corpus:
        own = set(planted.topic_words[doc.label])
        other = planted.planted_words - own
        tokens = doc.text.split()
        assert len(tokens) == 12
        # tokens come only from the document's own topic or the noise pool
        assert not other & set(tokens)


def test_planted_corpus_deterministic():
    a = make_planted_corpus(seed=5, docs_per_topic=4, noise_vocab_size=30)
    b = make_planted_corpus(seed=5, docs_per_topic=4, noise_vocab_size=30)
    assert a.corpus.documents == b.corpus.documents
    assert a.sentences == b.sentences
    c = make_planted_corpus(seed=6, docs_per_topic=4, noise_vocab_size=30)
    assert a.corpus.documents != c.corpus.documents


def test_planted_topic_fraction_is_respected():
    planted = make_planted_corpus(
        n_topics=2, docs_per_topic=50, tokens_per_sentence=20,
        topic_fraction=0.8, seed=2,
    )
    tokens = [tok for doc in planted.corpus for tok in doc.text.split()]
    topical = sum(tok in planted.planted_words for tok in tokens)
    assert 0.75 < topical / len(tokens) < 0.85


def test_split_half_alternates_within_label():
    planted = make_planted_corpus(n_topics=2, docs_per_topic=9, seed=3)
    train, test = split_half(planted.corpus)
    assert len(train) == 10 and len(test) == 8  # odd per-label counts favor train
    assert {d.id for d in train}.isdisjoint({d.id for d in test})
    assert train.label_set == test.label_set == planted.corpus.label_set
    by_label_train = Counter(d.label for d in train)
    by_label_test = Counter(d.label for d in test)
    assert by_label_train == {"topic0": 5, "topic1": 5}
    assert by_label_test == {"topic0": 4, "topic1": 4}
    # deterministic
    again_train, again_test = split_half(planted.corpus)
    assert [d.id for d in again_train] == [d.id for d in train]
    assert [d.id for d in again_test] == [d.id for d in test]
