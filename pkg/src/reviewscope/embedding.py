"""Embedding providers, the cosine-similarity kernel, and the vector store.

Vectors come from one of three interchangeable providers: an exact-match
file store, a deterministic hash-based test embedder, or a remote HTTP
encoder. The store's on-disk format (magic ``EMBS``) is bit-exact:
little-endian integers and float32 vectors, so write/load round-trips
preserve every byte.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
import time
import urllib.error
import urllib.request
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    EmbeddingError,
    EmbeddingLookupError,
    ProjectionError,
    SimilarityError,
    StoreFormatError,
    TransportError,
)
from .tokenizers import word_tokenize

NORM_EPS = 1e-12
DEFAULT_DIM = 768

STORE_MAGIC = b"EMBS"
STORE_VERSION = 1


def cosine_similarity(x, y) -> float:
    """Cosine of the angle between two equal-length vectors, in [-1, 1].

    Zero-norm inputs are an error, never a silent 0.
    """
    xv = np.asarray(x, dtype=np.float64)
    yv = np.asarray(y, dtype=np.float64)
    if xv.ndim != 1 or yv.ndim != 1 or xv.shape != yv.shape:
        raise SimilarityError(f"dimension mismatch: {xv.shape} vs {yv.shape}")
    nx = float(np.linalg.norm(xv))
    ny = float(np.linalg.norm(yv))
    if nx < NORM_EPS or ny < NORM_EPS:
        raise SimilarityError("zero-norm vector")
    return float(np.clip(np.dot(xv, yv) / (nx * ny), -1.0, 1.0))


class EmbeddingStore:
    """Immutable-after-load mapping from phrase text to a fixed-dim vector."""

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.dim = dim
        self._entries: dict[str, np.ndarray] = {}

    def add(self, key: str, vector) -> None:
        vec = np.asarray(vector, dtype=np.float32)
        if vec.shape != (self.dim,):
            raise EmbeddingError(f"vector for {key!r} has shape {vec.shape}, store dim is {self.dim}")
        self._entries[key] = vec

    def get(self, key: str) -> np.ndarray:
        try:
            return self._entries[key]
        except KeyError:
            raise EmbeddingLookupError(f"phrase not in store: {key!r}") from None

    def __contains__(self, key: str) -> bool:
        return key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def keys(self):
        return self._entries.keys()

    def items(self):
        return self._entries.items()


def write_store(store: EmbeddingStore, path: str | Path) -> None:
    """Serialize a store: magic, u32 version, u32 dim, u64 count, records."""
    with Path(path).open("wb") as fh:
        fh.write(STORE_MAGIC)
        fh.write(struct.pack("<IIQ", STORE_VERSION, store.dim, len(store)))
        for key, vec in store.items():
            encoded = key.encode("utf-8")
            fh.write(struct.pack("<I", len(encoded)))
            fh.write(encoded)
            fh.write(vec.astype("<f4", copy=False).tobytes())


def load_store(path: str | Path) -> EmbeddingStore:
    """Load and validate an ``EMBS`` file; malformed input reports its offset."""
    data = Path(path).read_bytes()
    if len(data) < 4 or data[:4] != STORE_MAGIC:
        raise StoreFormatError("bad magic; not an EMBS store", 0)
    if len(data) < 20:
        raise StoreFormatError("truncated header", len(data))
    version, dim, count = struct.unpack_from("<IIQ", data, 4)
    if version != STORE_VERSION:
        raise StoreFormatError(f"unsupported version {version}", 4)
    if dim < 1:
        raise StoreFormatError(f"bad dimension {dim}", 8)
    store = EmbeddingStore(dim)
    offset = 20
    record_bytes = 4 * dim
    for _ in range(count):
        if offset + 4 > len(data):
            raise StoreFormatError("truncated record header", offset)
        (key_len,) = struct.unpack_from("<I", data, offset)
        offset += 4
        if offset + key_len > len(data):
            raise StoreFormatError("key length exceeds remaining bytes", offset)
        try:
            key = data[offset : offset + key_len].decode("utf-8")
        except UnicodeDecodeError:
            raise StoreFormatError("key is not valid UTF-8", offset) from None
        offset += key_len
        if offset + record_bytes > len(data):
            raise StoreFormatError("truncated vector", offset)
        if key in store:
            raise StoreFormatError(f"duplicate key {key!r}", offset)
        vec = np.frombuffer(data, dtype="<f4", count=dim, offset=offset).copy()
        offset += record_bytes
        store._entries[key] = vec
    if offset != len(data):
        raise StoreFormatError("trailing bytes after last record", offset)
    return store


class StoreProvider:
    """Serves vectors by exact phrase lookup from a loaded store."""

    kind = "store"

    def __init__(self, store: EmbeddingStore):
        self.store = store
        self.dim = store.dim

    @classmethod
    def from_file(cls, path: str | Path) -> "StoreProvider":
        return cls(load_store(path))

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        return np.stack([self.store.get(t).astype(np.float64) for t in texts]) if texts else np.zeros((0, self.dim))


class TestEmbedder:
    """Deterministic hash-based embedder for oracle tests and CI runs.

    Each distinct token maps through a seeded hash to a fixed random unit
    vector; a text embeds to the normalized mean of its token vectors.
    Optional ``anchors`` pull groups of tokens toward a shared direction
    (strength in [0, 1)), which makes same-group tokens near-parallel —
    the knob used by the planted-topic benchmarks.
    """

    kind = "test-embedder"
    __test__ = False  # not a pytest class, despite the name

    def __init__(
        self,
        dim: int = DEFAULT_DIM,
        seed: int = 0,
        anchors: Mapping[str, str] | None = None,
        anchor_strength: float = 0.95,
    ):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        if not 0.0 <= anchor_strength < 1.0:
            raise ValueError("anchor_strength must be in [0, 1)")
        self.dim = dim
        self.seed = seed
        self.anchors = dict(anchors) if anchors else {}
        self.anchor_strength = anchor_strength
        self._cache: dict[str, np.ndarray] = {}

    def _hash_unit(self, name: str) -> np.ndarray:
        digest = hashlib.blake2b(f"{self.seed}:{name}".encode("utf-8"), digest_size=8).digest()
        rng = np.random.default_rng(int.from_bytes(digest, "little"))
        vec = rng.standard_normal(self.dim)
        return vec / np.linalg.norm(vec)

    def token_vector(self, token: str) -> np.ndarray:
        cached = self._cache.get(token)
        if cached is not None:
            return cached
        vec = self._hash_unit(f"token:{token}")
        anchor = self.anchors.get(token)
        if anchor is not None:
            s = self.anchor_strength
            vec = s * self._hash_unit(f"anchor:{anchor}") + (1.0 - s) * vec
            vec = vec / np.linalg.norm(vec)
        self._cache[token] = vec
        return vec

    def embed_one(self, text: str) -> np.ndarray:
        tokens = word_tokenize(text)
        if not tokens:
            raise EmbeddingError(f"no tokens to embed in {text!r}")
        mean = np.mean([self.token_vector(t) for t in tokens], axis=0)
        norm = np.linalg.norm(mean)
        if norm < NORM_EPS:
            raise EmbeddingError(f"token vectors cancel out for {text!r}")
        return mean / norm

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        if not texts:
            return np.zeros((0, self.dim))
        return np.stack([self.embed_one(t) for t in texts])


class RemoteProvider:
    """POST /embed {"texts": [...]} -> {"dim": d, "vectors": [...]}.

    Transient failures (transport errors, 5xx) are retried with
    exponential backoff; anything else is a transport error.
    """

    kind = "remote"

    def __init__(self, url: str, retries: int = 3, backoff: float = 0.25, timeout: float = 30.0):
        self.url = url.rstrip("/")
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout
        self.dim: int | None = None

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        if not texts:
            return np.zeros((0, self.dim or 0))
        payload = self._post({"texts": list(texts)})
        vectors = payload.get("vectors")
        dim = payload.get("dim")
        if not isinstance(vectors, list) or not isinstance(dim, int) or len(vectors) != len(texts):
            raise TransportError(f"{self.url}/embed: malformed response")
        if self.dim is None:
            self.dim = dim
        elif dim != self.dim:
            raise TransportError(f"{self.url}/embed: dim changed from {self.dim} to {dim}")
        matrix = np.asarray(vectors, dtype=np.float64)
        if matrix.shape != (len(texts), dim):
            raise TransportError(f"{self.url}/embed: vector shape mismatch")
        return matrix

    def _post(self, body: dict) -> dict:
        data = json.dumps(body).encode("utf-8")
        last_error = ""
        for attempt in range(self.retries + 1):
            request = urllib.request.Request(
                f"{self.url}/embed",
                data=data,
                headers={"Content-Type": "application/json"},
                method="POST",
            )
            try:
                with urllib.request.urlopen(request, timeout=self.timeout) as response:
                    return json.loads(response.read().decode("utf-8"))
            except urllib.error.HTTPError as exc:
                last_error = f"HTTP {exc.code}"
                if exc.code < 500:
                    raise TransportError(f"{self.url}/embed: {last_error}") from None
            except (urllib.error.URLError, TimeoutError, json.JSONDecodeError) as exc:
                last_error = str(exc)
            if attempt < self.retries:
                time.sleep(self.backoff * (2 ** attempt))
        raise TransportError(f"{self.url}/embed: failed after {self.retries + 1} attempts ({last_error})")


EMBED_URL_ENV = "REVIEWSCOPE_EMBED_URL"


def resolve_provider(spec: str, dim: int = DEFAULT_DIM):
    """Map a provider spec string to a provider instance.

    ``test:SEED`` or ``test:SEED:DIM`` | ``store:PATH`` | ``remote:URL``.
    The REVIEWSCOPE_EMBED_URL environment variable overrides the remote
    endpoint.
    """
    kind, sep, rest = spec.partition(":")
    if not sep:
        raise EmbeddingError(f"bad provider spec {spec!r}; expected kind:parameter")
    if kind == "test":
        parts = rest.split(":")
        seed = int(parts[0])
        test_dim = int(parts[1]) if len(parts) > 1 else dim
        return TestEmbedder(dim=test_dim, seed=seed)
    if kind == "store":
        return StoreProvider.from_file(rest)
    if kind == "remote":
        return RemoteProvider(os.environ.get(EMBED_URL_ENV, rest))
    raise EmbeddingError(f"unknown provider kind {kind!r}")


def embed(provider, texts: Sequence[str]) -> list[np.ndarray]:
    """Embed texts through a provider, one vector per text, order-aligned."""
    matrix = provider.embed(list(texts))
    return [matrix[i] for i in range(len(texts))]


def pca_project_2d(vectors) -> list[tuple[float, float]]:
    """Project vectors onto their top-2 principal components.

    Components are ordered by descending eigenvalue; each component's
    sign is fixed so its largest-magnitude loading is positive.
    """
    matrix = np.asarray(list(vectors), dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] < 2:
        raise ProjectionError("need at least 2 vectors of equal dimension")
    if matrix.shape[1] < 2:
        raise ProjectionError("need at least 2 dimensions")
    centered = matrix - matrix.mean(axis=0)
    if float(np.abs(centered).max(initial=0.0)) < 1e-15:
        raise ProjectionError("zero variance: fewer than 2 distinct vectors")
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    components = vt[:2]
    signs = np.sign(components[np.arange(2), np.argmax(np.abs(components), axis=1)])
    signs[signs == 0] = 1.0
    components = components * signs[:, None]
    coords = centered @ components.T
    return [(float(x), float(y)) for x, y in coords]
