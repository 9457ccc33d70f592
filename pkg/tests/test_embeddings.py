"""Hashing embeddings and the precomputed embedding file format."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from proplab.corpus import Segment
from proplab.embeddings import (
    DEFAULT_DIMENSION,
    EmbeddingStore,
    HashEmbeddingProvider,
    StoreEmbeddingProvider,
    fnv1a64,
    get_embedding,
    hash_embed,
    load_embeddings,
    save_embeddings,
)
from proplab.errors import StoreError


def reference_fnv1a64(data: bytes) -> int:
    """Hand-transcribed FNV-1a (64-bit): offset basis 14695981039346656037,
    prime 1099511628211, xor byte then multiply, mod 2**64."""
    h = 14695981039346656037
    for b in data:
        h = ((h ^ b) * 1099511628211) % (2**64)
    return h


def reference_hash_embed(tokens, dim):
    """Oracle: accumulate signed unigram + adjacent-bigram hits, then L2."""
    vec = [0.0] * dim
    feats = list(tokens) + [f"{a}_{b}" for a, b in zip(tokens, tokens[1:])]
    for feat in feats:
        h = reference_fnv1a64(feat.encode("utf-8"))
        vec[h % dim] += 1.0 if h >> 63 == 0 else -1.0
    norm = math.sqrt(sum(v * v for v in vec))
    return [v / norm for v in vec] if norm else vec


class TestFnv1a64:
    def test_known_vectors(self):
        # published FNV-1a test vectors
        assert fnv1a64(b"") == 0xCBF29CE484222325
        assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
        assert fnv1a64(b"foobar") == 0x85944171F73967E8

    @given(st.binary(max_size=64))
    def test_matches_reference(self, data):
        assert fnv1a64(data) == reference_fnv1a64(data)


class TestHashEmbed:
    def test_matches_oracle_small_dim(self):
        got = hash_embed(["make", "america"], dim=16)
        assert got.tolist() == pytest.approx(reference_hash_embed(["make", "america"], 16))

    def test_matches_oracle_default_dim(self):
        tokens = ["make", "america", "great", "again"]
        got = hash_embed(tokens)
        assert got.shape == (DEFAULT_DIMENSION,)
        assert got.tolist() == pytest.approx(
            reference_hash_embed(tokens, DEFAULT_DIMENSION), abs=1e-15
        )

    def test_empty_tokens_zero_vector(self):
        assert not hash_embed([], dim=8).any()

    def test_unit_norm(self):
        vec = hash_embed(["one", "two", "three"], dim=64)
        assert float(np.linalg.norm(vec)) == pytest.approx(1.0, abs=1e-12)

    def test_deterministic_across_calls(self):
        a = hash_embed(["alpha", "beta"], dim=32)
        b = hash_embed(["alpha", "beta"], dim=32)
        assert np.array_equal(a, b)

    def test_bigrams_make_order_matter(self):
        assert not np.array_equal(
            hash_embed(["a", "b"], dim=256), hash_embed(["b", "a"], dim=256)
        )

    def test_identical_tokens_max_cosine(self):
        a = hash_embed(["same", "tokens"], dim=128)
        assert float(a @ a) == pytest.approx(1.0, abs=1e-12)

    def test_bad_dimension(self):
        with pytest.raises(ValueError):
            hash_embed(["x"], dim=0)

    @given(st.lists(st.text(alphabet="abcdefg", min_size=1, max_size=5), min_size=1, max_size=8))
    def test_norm_is_zero_or_one(self, tokens):
        norm = float(np.linalg.norm(hash_embed(tokens, dim=32)))
        assert norm == pytest.approx(1.0, abs=1e-12) or norm == 0.0


class TestEmbeddingFile:
    def test_load_small_file(self, tmp_path):
        path = tmp_path / "emb.tsv"
        path.write_text(
            "#dim=4\n1:0:5\t0.1\t0.2\t0.3\t0.4\n2:0:5\t1\t0\t0\t0\n",
            encoding="utf-8",
        )
        store = load_embeddings(path)
        assert store.dim == 4 and len(store) == 2
        assert store.get("1:0:5").tolist() == [0.1, 0.2, 0.3, 0.4]

    def test_comment_lines_skipped(self, tmp_path):
        path = tmp_path / "emb.tsv"
        path.write_text("#dim=2\n#model=demo\nk:0:1\t1\t2\n", encoding="utf-8")
        assert load_embeddings(path).get("k:0:1").tolist() == [1.0, 2.0]

    def test_missing_header(self, tmp_path):
        path = tmp_path / "emb.tsv"
        path.write_text("k:0:1\t1\t2\n", encoding="utf-8")
        with pytest.raises(StoreError, match="#dim="):
            load_embeddings(path)

    def test_arity_mismatch(self, tmp_path):
        path = tmp_path / "emb.tsv"
        path.write_text("#dim=4\nk:0:1\t1\t2\t3\n", encoding="utf-8")
        with pytest.raises(StoreError, match="emb.tsv:2.*3 values.*header says 4"):
            load_embeddings(path)

    def test_duplicate_key(self, tmp_path):
        path = tmp_path / "emb.tsv"
        path.write_text("#dim=1\nk:0:1\t1\nk:0:1\t2\n", encoding="utf-8")
        with pytest.raises(StoreError, match="duplicate"):
            load_embeddings(path)

    def test_non_numeric_component(self, tmp_path):
        path = tmp_path / "emb.tsv"
        path.write_text("#dim=2\nk:0:1\t1\tNO\n", encoding="utf-8")
        with pytest.raises(StoreError, match="non-numeric"):
            load_embeddings(path)

    def test_wide_row_round_trip(self, tmp_path):
        store = EmbeddingStore(DEFAULT_DIMENSION)
        store.add("a:0:9", hash_embed(["alpha", "beta", "gamma"]))
        path = tmp_path / "emb.tsv"
        save_embeddings(store, path, comments=["model=hash"])
        again = load_embeddings(path)
        assert again.dim == DEFAULT_DIMENSION
        np.testing.assert_allclose(
            again.get("a:0:9"), store.get("a:0:9"), rtol=1e-8, atol=1e-12
        )

    def test_save_load_save_is_stable(self, tmp_path):
        store = EmbeddingStore(3)
        store.add("k:0:1", np.array([0.123456789123, -1.0, 2.5e-07]))
        first, second = tmp_path / "a.tsv", tmp_path / "b.tsv"
        save_embeddings(store, first)
        save_embeddings(load_embeddings(first), second)
        assert first.read_bytes() == second.read_bytes()


def _segment(tokens, left=(), right=(), key="1:0:5"):
    return Segment(
        key=key,
        surface=" ".join(tokens),
        tokens=tuple(tokens),
        left_context=tuple(left),
        right_context=tuple(right),
    )


class TestProviders:
    def test_hash_provider_ignores_context_by_default(self):
        seg = _segment(["core"], left=["before"], right=["after"])
        provider = HashEmbeddingProvider(dim=64)
        assert np.array_equal(
            provider.get_embedding(seg), hash_embed(["core"], dim=64)
        )

    def test_hash_provider_with_context(self):
        seg = _segment(["core"], left=["before"], right=["after"])
        provider = HashEmbeddingProvider(dim=64)
        assert np.array_equal(
            provider.get_embedding(seg, use_context=True),
            hash_embed(["before", "core", "after"], dim=64),
        )

    def test_store_provider_plain_and_context_keys(self):
        store = EmbeddingStore(2)
        store.add("1:0:5", np.array([1.0, 0.0]))
        store.add("1:0:5#ctx", np.array([0.0, 1.0]))
        provider = StoreEmbeddingProvider(store)
        seg = _segment(["x"])
        assert get_embedding(seg, provider).tolist() == [1.0, 0.0]
        assert get_embedding(seg, provider, use_context=True).tolist() == [0.0, 1.0]

    def test_store_provider_missing_key(self):
        provider = StoreEmbeddingProvider(EmbeddingStore(2))
        with pytest.raises(StoreError, match="1:0:5"):
            provider.get_embedding(_segment(["x"]))
