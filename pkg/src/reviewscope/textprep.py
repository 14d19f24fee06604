"""Text cleaning and sentence/sub-sentence splitting.

Cleaning lower-cases, expands contractions, strips noise characters,
and collapses repeats while preserving the sentence-delimiting
punctuation that the splitter consumes. Split sentences end up fully
punctuation-free.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ConfigError

DEFAULT_DELIMITERS = ".!?;:"

_QUOTE_TRANSLATION = str.maketrans({"’": "'", "‘": "'", "`": "'"})
_WS_RE = re.compile(r"\s+")


def load_contractions(path: str | Path | None = None) -> dict[str, str]:
    """Read a two-column TSV contraction table (default: the bundled one)."""
    if path is None:
        text = resources.files("reviewscope.data").joinpath("contractions.tsv").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    table: dict[str, str] = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        short, sep, long = line.partition("\t")
        if not sep:
            raise ConfigError(f"contraction table line without tab: {line!r}")
        table[short.strip().lower()] = long.strip().lower()
    return table


@dataclass
class CleaningConfig:
    """Cleaning/splitting parameters.

    ``comma_split`` promotes the comma to a sub-sentence delimiter; off
    by default because comma splits fragment enumerations.
    """

    delimiters: str = DEFAULT_DELIMITERS
    comma_split: bool = False
    contractions: dict = field(default_factory=load_contractions)

    @classmethod
    def from_file(cls, path: str | Path) -> "CleaningConfig":
        """Parse a line-oriented ``key = value`` cleaning config."""
        kwargs: dict = {}
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = key.strip(), value.strip()
            if key == "delimiters":
                kwargs["delimiters"] = value
            elif key == "comma_split":
                if value not in ("on", "off"):
                    raise ConfigError(f"{path}:{lineno}: comma_split must be on/off")
                kwargs["comma_split"] = value == "on"
            elif key == "contractions":
                kwargs["contractions"] = load_contractions(value)
            else:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        return cls(**kwargs)

    @property
    def active_delimiters(self) -> str:
        if self.comma_split and "," not in self.delimiters:
            return self.delimiters + ","
        return self.delimiters


_DEFAULT_CONFIG: CleaningConfig | None = None


def _default_config() -> CleaningConfig:
    global _DEFAULT_CONFIG
    if _DEFAULT_CONFIG is None:
        _DEFAULT_CONFIG = CleaningConfig()
    return _DEFAULT_CONFIG


def _contraction_re(table: dict[str, str]) -> re.Pattern:
    keys = sorted(table, key=len, reverse=True)
    alternation = "|".join(re.escape(k) for k in keys)
    return re.compile(rf"(?<![a-z0-9])(?:{alternation})(?![a-z0-9])")


def clean_text(raw: str, config: CleaningConfig | None = None) -> str:
    """Normalize raw review text, keeping sentence delimiters for the splitter.

    Idempotent: cleaning already-clean text is a no-op.
    """
    config = config or _default_config()
    delims = config.active_delimiters
    text = raw.lower().translate(_QUOTE_TRANSLATION)
    if config.contractions:
        pattern = _contraction_re(config.contractions)
        text = pattern.sub(lambda m: config.contractions[m.group(0)], text)
    text = text.replace("'", "")
    # noise characters become spaces so they never glue words together
    text = re.sub(rf"[^\w\s{re.escape(delims)}]|_", " ", text)
    text = re.sub(rf"([{re.escape(delims)}])[{re.escape(delims)}]+", r"\1", text)
    return _WS_RE.sub(" ", text).strip()


@dataclass(frozen=True)
class Sentence:
    """A cleaned sentence/sub-sentence unit of one review."""

    review_id: str
    index: int
    text: str
    tokens: tuple

    @classmethod
    def make(cls, review_id: str, index: int, text: str) -> "Sentence":
        return cls(review_id=review_id, index=index, text=text, tokens=tuple(text.split()))


def split_sentences(
    cleaned: str,
    review_id: str = "",
    config: CleaningConfig | None = None,
) -> list[Sentence]:
    """Split cleaned text on sentence delimiters into indexed sentences.

    Delimiters are consumed; residual punctuation inside segments is
    dropped; empty segments are skipped.
    """
    config = config or _default_config()
    delims = config.active_delimiters
    sentences: list[Sentence] = []
    for segment in re.split(rf"[{re.escape(delims)}]", cleaned):
        segment = re.sub(r"[^\w\s]|_", " ", segment)
        segment = _WS_RE.sub(" ", segment).strip()
        if not segment:
            continue
        sentences.append(Sentence.make(review_id, len(sentences), segment))
    return sentences
