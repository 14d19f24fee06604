import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from reviewscope.errors import ConfigError
from reviewscope.textprep import (
    DEFAULT_DELIMITERS,
    CleaningConfig,
    clean_text,
    load_contractions,
    split_sentences,
)


def test_clean_text_hand_examples():
    assert clean_text("Don't buy -- it BROKE!!!") == "do not buy it broke!"
    assert clean_text("Great   value;won't return") == "great value;will not return"
    assert clean_text("5/5 stars... really") == "5 5 stars. really"


def test_clean_text_strips_quotes_and_underscores():
    assert clean_text("it’s the _best_") == "it is the best"
    assert clean_text("rock'n'roll") == "rocknroll"


def test_clean_text_contraction_needs_word_boundary():
    # "can't" inside a longer token is left alone
    assert clean_text("scant scan't") == "scant scant"
    assert clean_text("can't") == "can not"


# printable-ish text with plenty of punctuation and unicode quotes
_raw_text = st.text(
    alphabet=st.sampled_from(list("abcXYZ019 .!?;:,'’-_/\"()&\n\t")),
    max_size=80,
)


@given(_raw_text)
def test_clean_text_idempotent(raw):
    once = clean_text(raw)
    assert clean_text(once) == once


@given(_raw_text)
def test_clean_text_output_alphabet(raw):
    cleaned = clean_text(raw)
    assert re.fullmatch(rf"[a-z0-9 {re.escape(DEFAULT_DELIMITERS)}]*", cleaned)
    assert "  " not in cleaned
    assert cleaned == cleaned.strip()
    # no delimiter runs survive
    assert not re.search(rf"[{re.escape(DEFAULT_DELIMITERS)}]{{2,}}", cleaned)


def test_split_sentences_hand_example():
    cleaned = clean_text("Sound is great! Battery died; support was useless...")
    parts = split_sentences(cleaned, review_id="r9")
    assert [s.text for s in parts] == [
        "sound is great",
        "battery died",
        "support was useless",
    ]
    assert [(s.review_id, s.index) for s in parts] == [("r9", 0), ("r9", 1), ("r9", 2)]
    assert parts[0].tokens == ("sound", "is", "great")


def test_split_sentences_skips_empty_segments():
    assert split_sentences("...") == []
    assert [s.text for s in split_sentences("a. . b")] == ["a", "b"]


@given(_raw_text)
def test_split_sentences_are_clean_tokens(raw):
    for sentence in split_sentences(clean_text(raw)):
        assert sentence.text
        assert sentence.tokens == tuple(sentence.text.split())
        for token in sentence.tokens:
            assert re.fullmatch(r"[a-z0-9]+", token)


@given(_raw_text)
def test_split_preserves_token_stream(raw):
    """Splitting only removes delimiters, never word tokens."""
    cleaned = clean_text(raw)
    stream = re.findall(r"[a-z0-9]+", cleaned)
    split_stream = [t for s in split_sentences(cleaned) for t in s.tokens]
    assert split_stream == stream


def test_comma_split_promotes_comma():
    config = CleaningConfig(comma_split=True)
    assert "," in config.active_delimiters
    cleaned = clean_text("cheap, light, loud", config)
    assert [s.text for s in split_sentences(cleaned, config=config)] == [
        "cheap",
        "light",
        "loud",
    ]
    # off by default: commas are noise, not delimiters
    assert [s.text for s in split_sentences(clean_text("cheap, light"))] == ["cheap light"]


def test_cleaning_config_from_file(tmp_path):
    path = tmp_path / "clean.cfg"
    path.write_text("delimiters = .!\ncomma_split = on\n", encoding="utf-8")
    config = CleaningConfig.from_file(path)
    assert config.delimiters == ".!"
    assert config.comma_split is True
    assert config.active_delimiters == ".!,"


def test_cleaning_config_rejects_unknown_key(tmp_path):
    path = tmp_path / "clean.cfg"
    path.write_text("delimiter = .\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        CleaningConfig.from_file(path)


def test_custom_contraction_table(tmp_path):
    path = tmp_path / "contractions.tsv"
    path.write_text("won't\twill not\n", encoding="utf-8")
    table = load_contractions(path)
    config = CleaningConfig(contractions=table)
    assert clean_text("won't don't", config) == "will not dont"


def test_bundled_contractions_lowercase():
    table = load_contractions()
    assert table["can't"] == "can not"
    assert all(k == k.lower() and v == v.lower() for k, v in table.items())
