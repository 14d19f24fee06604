"""Tokenizers used for length filtering and text handling.

Two interchangeable tokenizers are provided: a plain word tokenizer
(lower-cased alphanumeric runs) and a wordpiece tokenizer driven by a
vocabulary file, which approximates subword tokenization for the
16..128-token review length filter.
"""

from __future__ import annotations

import re
from pathlib import Path

_WORD_RE = re.compile(r"[a-z0-9]+")
_WORD_OR_PUNCT_RE = re.compile(r"[a-z0-9]+|[^a-z0-9\s]")


def word_tokenize(text: str) -> list[str]:
    """Split text into lower-cased alphanumeric word tokens."""
    return _WORD_RE.findall(text.lower())


class WordPieceTokenizer:
    """Greedy longest-match-first subword tokenizer.

    The vocabulary file holds one token per line; continuation pieces
    carry a leading ``##``. Words with no matching decomposition map to
    a single unknown token.
    """

    def __init__(self, vocab, unk_token: str = "[UNK]", max_word_chars: int = 100):
        self.vocab = frozenset(vocab)
        self.unk_token = unk_token
        self.max_word_chars = max_word_chars

    @classmethod
    def from_file(cls, path: str | Path, **kwargs) -> "WordPieceTokenizer":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        vocab = [ln.strip() for ln in lines if ln.strip()]
        return cls(vocab, **kwargs)

    def __call__(self, text: str) -> list[str]:
        pieces: list[str] = []
        for word in _WORD_OR_PUNCT_RE.findall(text.lower()):
            pieces.extend(self._split_word(word))
        return pieces

    def _split_word(self, word: str) -> list[str]:
        if len(word) > self.max_word_chars:
            return [self.unk_token]
        pieces: list[str] = []
        start = 0
        while start < len(word):
            end = len(word)
            found = None
            while start < end:
                piece = word[start:end]
                if start > 0:
                    piece = "##" + piece
                if piece in self.vocab:
                    found = piece
                    break
                end -= 1
            if found is None:
                return [self.unk_token]
            pieces.append(found)
            start = end
        return pieces


def resolve_tokenizer(spec: str):
    """Map a tokenizer spec string to a callable.

    ``word`` selects the plain word tokenizer; ``wordpiece:<vocab-path>``
    loads a wordpiece vocabulary file.
    """
    if spec == "word":
        return word_tokenize
    if spec.startswith("wordpiece:"):
        return WordPieceTokenizer.from_file(spec.split(":", 1)[1])
    raise ValueError(f"unknown tokenizer spec: {spec!r}")
