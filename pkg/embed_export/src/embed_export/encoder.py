"""Pretrained sentence-encoder wrapper.

Loads a sentence-transformers model once and exposes batched encoding to
float32 rows. Inference runs in eval mode with gradients off (the
library's default), so identical inputs produce identical vectors.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import EncoderError


class Encoder:
    def __init__(self, model_id: str, device: str = "cpu"):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:  # pragma: no cover - hard dependency
            raise EncoderError(f"sentence-transformers is not installed: {exc}") from exc
        try:
            self._model = SentenceTransformer(model_id, device=device)
        except Exception as exc:
            raise EncoderError(f"cannot load model {model_id!r}: {exc}") from exc
        self.model_id = model_id
        # method name changed in sentence-transformers 5.x
        probe = getattr(self._model, "get_embedding_dimension", None) or getattr(
            self._model, "get_sentence_embedding_dimension", None
        )
        dim = probe() if probe else None
        if not dim:
            dim = int(self._model.encode(["probe"], convert_to_numpy=True).shape[1])
        self.dim = int(dim)

    def encode(self, texts: Sequence[str], batch_size: int = 64) -> np.ndarray:
        """One float32 row per text, in input order."""
        texts = list(texts)
        if not texts:
            return np.zeros((0, self.dim), dtype=np.float32)
        try:
            matrix = self._model.encode(
                texts, batch_size=batch_size, convert_to_numpy=True, show_progress_bar=False
            )
        except Exception as exc:
            raise EncoderError(f"encoding failed: {exc}") from exc
        matrix = np.asarray(matrix, dtype=np.float32)
        if matrix.shape != (len(texts), self.dim):
            raise EncoderError(f"encoder returned shape {matrix.shape}, expected {(len(texts), self.dim)}")
        return matrix
