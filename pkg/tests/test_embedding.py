import struct

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as npst

from reviewscope.embedding import (
    EMBED_URL_ENV,
    EmbeddingStore,
    StoreProvider,
    TestEmbedder,
    cosine_similarity,
    load_store,
    pca_project_2d,
    resolve_provider,
    write_store,
)
from reviewscope.errors import (
    EmbeddingError,
    EmbeddingLookupError,
    ProjectionError,
    SimilarityError,
    StoreFormatError,
)

# ---------------------------------------------------------------- cosine


def test_cosine_hand_values():
    assert cosine_similarity([1, 0], [1, 0]) == pytest.approx(1.0, abs=1e-12)
    assert cosine_similarity([1, 0], [0, 1]) == pytest.approx(0.0, abs=1e-12)
    assert cosine_similarity([1, 0], [-1, 0]) == pytest.approx(-1.0, abs=1e-12)
    assert cosine_similarity([1.0, 0.0], [1.0, 1.0]) == pytest.approx(
        0.70710678, abs=1e-8
    )


def test_cosine_rejects_bad_inputs():
    with pytest.raises(SimilarityError):
        cosine_similarity([1, 0], [1, 0, 0])
    with pytest.raises(SimilarityError):
        cosine_similarity([0, 0], [1, 0])
    with pytest.raises(SimilarityError):
        cosine_similarity([[1, 0]], [[1, 0]])


_finite_vec = npst.arrays(
    np.float64,
    st.integers(2, 6),
    elements=st.floats(-1e3, 1e3, allow_nan=False),
)


@given(_finite_vec, st.data())
def test_cosine_properties(x, data):
    if np.linalg.norm(x) < 1e-6:
        x = x + 1.0
    y = data.draw(
        npst.arrays(
            np.float64, x.shape, elements=st.floats(-1e3, 1e3, allow_nan=False)
        )
    )
    if np.linalg.norm(y) < 1e-6:
        y = y - 2.0
    s = cosine_similarity(x, y)
    assert -1.0 <= s <= 1.0
    assert cosine_similarity(y, x) == pytest.approx(s, abs=1e-12)
    scale = data.draw(st.floats(1e-3, 1e3))
    assert cosine_similarity(scale * x, y) == pytest.approx(s, abs=1e-9)
    assert cosine_similarity(x, x) == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------- store


def _random_store(rng, dim=8, count=10):
    store = EmbeddingStore(dim)
    for i in range(count):
        store.add(f"phrase {i}", rng.standard_normal(dim).astype(np.float32))
    return store


def test_store_roundtrip_bit_exact(tmp_path):
    rng = np.random.default_rng(7)
    store = _random_store(rng, dim=5, count=17)
    path = tmp_path / "vec.embs"
    write_store(store, path)
    loaded = load_store(path)
    assert loaded.dim == 5
    assert list(loaded.keys()) == list(store.keys())
    for key, vec in store.items():
        np.testing.assert_array_equal(loaded.get(key), vec)
    # rewriting the loaded store reproduces the file byte for byte
    second = tmp_path / "vec2.embs"
    write_store(loaded, second)
    assert second.read_bytes() == path.read_bytes()


def test_store_handles_unicode_and_empty_keys(tmp_path):
    store = EmbeddingStore(3)
    store.add("café crème", np.ones(3, dtype=np.float32))
    store.add("", np.zeros(3, dtype=np.float32))
    path = tmp_path / "u.embs"
    write_store(store, path)
    loaded = load_store(path)
    assert "café crème" in loaded
    assert "" in loaded


def test_store_header_layout(tmp_path):
    store = EmbeddingStore(2)
    store.add("ab", np.array([1.0, 2.0], dtype=np.float32))
    path = tmp_path / "one.embs"
    write_store(store, path)
    data = path.read_bytes()
    assert data[:4] == b"EMBS"
    version, dim, count = struct.unpack_from("<IIQ", data, 4)
    assert (version, dim, count) == (1, 2, 1)
    (key_len,) = struct.unpack_from("<I", data, 20)
    assert key_len == 2
    assert data[24:26] == b"ab"
    assert struct.unpack_from("<2f", data, 26) == (1.0, 2.0)
    assert len(data) == 26 + 8


def _write_and_read(tmp_path, data: bytes):
    path = tmp_path / "broken.embs"
    path.write_bytes(data)
    return path


@pytest.mark.parametrize(
    "mutate, message, offset",
    [
        (lambda d: b"XEMB" + d[4:], "bad magic", 0),
        (lambda d: d[:10], "truncated header", 10),
        (lambda d: d[:4] + struct.pack("<I", 9) + d[8:], "unsupported version", 4),
        (lambda d: d[:8] + struct.pack("<I", 0) + d[12:], "bad dimension", 8),
        (lambda d: d[:25], "key length exceeds", 24),
        (lambda d: d[:30], "truncated vector", 26),
        (lambda d: d + b"\x00", "trailing bytes", 34),
        (lambda d: d[:20] + struct.pack("<I", 1) + b"\xff" + d[25:] + b"\x00", "not valid UTF-8", 24),
    ],
)
def test_store_corruption_reports_offset(tmp_path, mutate, message, offset):
    store = EmbeddingStore(2)
    store.add("ab", np.array([1.0, 2.0], dtype=np.float32))
    good = tmp_path / "good.embs"
    write_store(store, good)
    path = _write_and_read(tmp_path, mutate(good.read_bytes()))
    with pytest.raises(StoreFormatError) as err:
        load_store(path)
    assert message in str(err.value)
    assert err.value.offset == offset
    assert f"byte offset {offset}" in str(err.value)


def test_store_truncated_record_header(tmp_path):
    store = EmbeddingStore(2)
    write_store(store, tmp_path / "empty.embs")
    data = (tmp_path / "empty.embs").read_bytes()
    # claim one record but provide none
    broken = data[:12] + struct.pack("<Q", 1)
    path = _write_and_read(tmp_path, broken)
    with pytest.raises(StoreFormatError) as err:
        load_store(path)
    assert "truncated record header" in str(err.value)
    assert err.value.offset == 20


def test_store_duplicate_key_rejected(tmp_path):
    store = EmbeddingStore(1)
    store.add("k", np.array([1.0], dtype=np.float32))
    good = tmp_path / "dup.embs"
    write_store(store, good)
    data = good.read_bytes()
    record = data[20:]
    doubled = data[:12] + struct.pack("<Q", 2) + record + record
    path = _write_and_read(tmp_path, doubled)
    with pytest.raises(StoreFormatError, match="duplicate key"):
        load_store(path)


def test_store_lookup_error_names_phrase():
    store = EmbeddingStore(2)
    with pytest.raises(EmbeddingLookupError, match="missing phrase"):
        store.get("missing phrase")


@given(
    st.integers(1, 6),
    st.lists(st.text(max_size=8), max_size=8, unique=True),
    st.integers(0, 2**31 - 1),
)
def test_store_roundtrip_property(dim, keys, seed):
    import tempfile

    rng = np.random.default_rng(seed)
    store = EmbeddingStore(dim)
    for key in keys:
        store.add(key, rng.standard_normal(dim).astype(np.float32))
    with tempfile.TemporaryDirectory() as tmp:
        path = f"{tmp}/s.embs"
        write_store(store, path)
        loaded = load_store(path)
    assert len(loaded) == len(store)
    for key, vec in store.items():
        np.testing.assert_array_equal(loaded.get(key), vec)


# ---------------------------------------------------------------- providers


def test_test_embedder_unit_norm_and_determinism():
    emb_a = TestEmbedder(dim=32, seed=3)
    emb_b = TestEmbedder(dim=32, seed=3)
    v1 = emb_a.embed_one("solid aluminum body")
    v2 = emb_b.embed_one("solid aluminum body")
    np.testing.assert_array_equal(v1, v2)
    assert np.linalg.norm(v1) == pytest.approx(1.0, abs=1e-9)
    # different seed, different geometry
    assert not np.allclose(TestEmbedder(dim=32, seed=4).embed_one("solid aluminum body"), v1)


def test_test_embedder_token_order_invariance_of_sum():
    emb = TestEmbedder(dim=16, seed=0)
    ab = emb.embed_one("alpha beta")
    ba = emb.embed_one("beta alpha")
    np.testing.assert_allclose(ab, ba, atol=1e-12)


def test_test_embedder_rejects_empty():
    emb = TestEmbedder(dim=8, seed=0)
    with pytest.raises(EmbeddingError):
        emb.embed_one("   ")


def test_test_embedder_anchor_pulls_tokens_together():
    anchors = {"warm": "tone", "mellow": "tone"}
    plain = TestEmbedder(dim=64, seed=1)
    anchored = TestEmbedder(dim=64, seed=1, anchors=anchors, anchor_strength=0.95)
    base = cosine_similarity(plain.token_vector("warm"), plain.token_vector("mellow"))
    pulled = cosine_similarity(anchored.token_vector("warm"), anchored.token_vector("mellow"))
    assert pulled > 0.9 > abs(base) + 0.5
    # un-anchored tokens are untouched
    np.testing.assert_array_equal(
        plain.token_vector("cable"), anchored.token_vector("cable")
    )


def test_store_provider_round_trip(tmp_path):
    emb = TestEmbedder(dim=8, seed=2)
    store = EmbeddingStore(8)
    for text in ["one", "two words"]:
        store.add(text, emb.embed_one(text).astype(np.float32))
    path = tmp_path / "p.embs"
    write_store(store, path)
    provider = StoreProvider.from_file(path)
    matrix = provider.embed(["two words", "one"])
    assert matrix.shape == (2, 8)
    np.testing.assert_allclose(matrix[1], emb.embed_one("one"), atol=1e-7)
    with pytest.raises(EmbeddingLookupError):
        provider.embed(["three"])


def test_resolve_provider_specs(tmp_path, monkeypatch):
    emb = resolve_provider("test:5:16")
    assert isinstance(emb, TestEmbedder)
    assert (emb.seed, emb.dim) == (5, 16)
    assert resolve_provider("test:5").dim == 768

    store = EmbeddingStore(4)
    store.add("x", np.zeros(4, dtype=np.float32))
    write_store(store, tmp_path / "s.embs")
    provider = resolve_provider(f"store:{tmp_path / 's.embs'}")
    assert provider.kind == "store"

    remote = resolve_provider("remote:http://example.invalid:1")
    assert remote.url == "http://example.invalid:1"
    monkeypatch.setenv(EMBED_URL_ENV, "http://override.invalid:2")
    assert resolve_provider("remote:http://example.invalid:1").url == "http://override.invalid:2"

    with pytest.raises(EmbeddingError):
        resolve_provider("word2vec")


# ---------------------------------------------------------------- projection


def test_pca_projection_plane_recovery():
    rng = np.random.default_rng(0)
    # rank-2 data embedded in 6-d
    basis = np.zeros((2, 6))
    basis[0, 0] = 1.0
    basis[1, 3] = 1.0
    coords = rng.standard_normal((40, 2)) * [5.0, 2.0]
    points = coords @ basis
    projected = np.asarray(pca_project_2d(points))
    assert projected.shape == (40, 2)
    # distances within the plane are preserved up to sign conventions
    d_orig = np.linalg.norm(coords[0] - coords[1])
    d_proj = np.linalg.norm(projected[0] - projected[1])
    assert d_proj == pytest.approx(d_orig, rel=1e-9)
    # first component carries the larger variance
    assert projected[:, 0].var() > projected[:, 1].var()


def test_pca_projection_deterministic_sign():
    pts = [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [2.0, 0.5, -1.0], [3.0, -0.5, 0.2]]
    first = pca_project_2d(pts)
    second = pca_project_2d([list(p) for p in pts])
    assert first == second


def test_pca_projection_errors():
    with pytest.raises(ProjectionError):
        pca_project_2d([[1.0, 2.0]])
    with pytest.raises(ProjectionError):
        pca_project_2d([[1.0], [2.0]])
    with pytest.raises(ProjectionError):
        pca_project_2d([[1.0, 2.0], [1.0, 2.0], [1.0, 2.0]])


def test_pca_handles_mean_offset():
    pts = np.array([[10.0, 0.0], [11.0, 0.0], [12.0, 0.0], [13.0, 0.0]])
    projected = np.asarray(pca_project_2d(pts))
    np.testing.assert_allclose(projected[:, 0], [-1.5, -0.5, 0.5, 1.5], atol=1e-12)
    np.testing.assert_allclose(projected[:, 1], 0.0, atol=1e-12)
