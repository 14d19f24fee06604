"""Writer for `.embs` embedding stores.

Byte layout (little-endian): magic ``EMBS``, header ``<IIQ`` holding
(version=1, dimension, record count), then per record a ``<I`` key byte
length, the UTF-8 key, and ``dimension`` float32 components. This is the
format the reviewscope pipeline loads; the two packages stay compatible
by sharing the byte layout, not code.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ExportError

MAGIC = b"EMBS"
VERSION = 1
_HEADER = struct.Struct("<IIQ")
_KEYLEN = struct.Struct("<I")


def store_bytes(keys: Sequence[str], matrix: np.ndarray) -> bytes:
    matrix = np.ascontiguousarray(matrix, dtype=np.float32)
    if matrix.ndim != 2:
        raise ExportError(f"expected a 2-d vector matrix, got shape {matrix.shape}")
    if len(keys) != matrix.shape[0]:
        raise ExportError(f"{len(keys)} keys for {matrix.shape[0]} vectors")
    if matrix.shape[1] < 1:
        raise ExportError("vectors must have at least one component")
    if len(set(keys)) != len(keys):
        raise ExportError("duplicate keys in store")

    parts = [MAGIC, _HEADER.pack(VERSION, matrix.shape[1], matrix.shape[0])]
    for key, row in zip(keys, matrix):
        encoded = key.encode("utf-8")
        parts.append(_KEYLEN.pack(len(encoded)))
        parts.append(encoded)
        parts.append(row.tobytes())
    return b"".join(parts)


def write_store(path: str | Path, keys: Sequence[str], matrix: np.ndarray) -> int:
    """Write one record per key; returns the byte count written."""
    data = store_bytes(keys, matrix)
    Path(path).write_bytes(data)
    return len(data)
