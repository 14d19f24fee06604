"""Shared fixtures and a deterministic hypothesis profile."""

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fixture_reviews_path() -> Path:
    """30 synthetic product reviews, six per rating 1..5."""
    return DATA_DIR / "fixture_reviews.jsonl"


@pytest.fixture(scope="session")
def lexicon_path() -> Path:
    return DATA_DIR / "lexicon.tsv"


@pytest.fixture
def tiny_reviews_path(tmp_path: Path) -> Path:
    """Three short reviews with hand-countable sentences and phrases.

    Sentence split: r1 -> ["great battery", "bad screen"],
    r2 -> ["works fine"], r3 -> ["too heavy", "returned it"].
    Every sentence has two tokens, so each yields three candidate
    n-grams and all 15 phrases are distinct.
    """
    path = tmp_path / "tiny.jsonl"
    lines = [
        '{"reviewText": "Great battery. Bad screen!", "overall": 5, "asin": "A1"}',
        '{"reviewText": "works fine", "overall": 3, "asin": "A2"}',
        '{"reviewText": "Too heavy; returned it.", "overall": 1, "asin": "A3"}',
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def tiny_lexicon_path(tmp_path: Path) -> Path:
    path = tmp_path / "tiny_lexicon.tsv"
    path.write_text("great\t1\nbad\t-1\n", encoding="utf-8")
    return path
