"""Batch export: phrase file in, `.embs` store out."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .encoder import Encoder
from .errors import EncoderError, ExportError
from .store import write_store


@dataclass(frozen=True)
class ExportJob:
    input: str  # one phrase per line, UTF-8
    output: str
    model: str
    batch_size: int = 64

    def __post_init__(self):
        if self.batch_size < 1:
            raise ExportError(f"batch size must be >= 1, got {self.batch_size}")


@dataclass(frozen=True)
class ExportResult:
    path: str
    count: int
    dim: int
    bytes_written: int


def read_phrases(path: str | Path) -> list[str]:
    """Distinct non-blank lines in first-seen order."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ExportError(f"cannot read {path}: {exc}") from exc
    seen: dict[str, None] = {}
    for line in lines:
        phrase = line.strip()
        if phrase:
            seen.setdefault(phrase)
    return list(seen)


def export_store(job: ExportJob, encoder: Encoder | None = None) -> ExportResult:
    """Encode the job's distinct phrases and write them as one store.

    Keys are the phrases verbatim; the store dimension is whatever the
    encoder produces. Pass ``encoder`` to reuse an already-loaded model.
    """
    phrases = read_phrases(job.input)
    if not phrases:
        raise ExportError(f"{job.input}: no phrases to export")
    if encoder is None:
        try:
            encoder = Encoder(job.model)
        except EncoderError as exc:
            raise ExportError(str(exc)) from exc
    matrix = encoder.encode(phrases, batch_size=job.batch_size)
    written = write_store(job.output, phrases, matrix)
    return ExportResult(path=str(job.output), count=len(phrases), dim=encoder.dim, bytes_written=written)
