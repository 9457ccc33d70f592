"""Sentence-embedding block: precomputed vector files plus a hashing fallback.

The file format is one header line ``#dim=<D>`` (further ``#`` lines are
treated as comments), then one ``key<TAB>v1..vD`` row per segment. When no
precomputed file is available, a deterministic feature-hashing embedding
over token unigrams and adjacent bigrams stands in; it uses FNV-1a 64-bit
with no seed, so vectors are reproducible across runs and platforms.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .corpus import Segment
from .errors import StoreError

DEFAULT_DIMENSION = 1024

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def hash_embed(tokens: list[str] | tuple[str, ...], dim: int = DEFAULT_DIMENSION) -> np.ndarray:
    """Signed feature hashing of unigrams + adjacent bigrams, L2-normalized.

    Each feature lands at ``hash % dim`` with sign +1 when the hash's top
    bit is clear, -1 otherwise. Empty input gives the zero vector.
    """
    if dim < 1:
        raise ValueError("embedding dimension must be >= 1")
    vec = np.zeros(dim, dtype=np.float64)
    features = list(tokens)
    features.extend(f"{a}_{b}" for a, b in zip(tokens, tokens[1:]))
    for feature in features:
        h = fnv1a64(feature.encode("utf-8"))
        sign = 1.0 if h < (1 << 63) else -1.0
        vec[h % dim] += sign
    norm = float(np.linalg.norm(vec))
    if norm > 0.0:
        vec /= norm
    return vec


class EmbeddingStore:
    """Fixed-dimension vectors keyed by ``Segment.key`` (``<key>#ctx`` for
    context-augmented variants)."""

    def __init__(self, dim: int):
        if dim < 1:
            raise StoreError(f"invalid embedding dimension: {dim}")
        self.dim = dim
        self._vectors: dict[str, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, key: str) -> bool:
        return key in self._vectors

    def keys(self):
        return self._vectors.keys()

    def get(self, key: str) -> np.ndarray | None:
        return self._vectors.get(key)

    def add(self, key: str, vector: np.ndarray) -> None:
        vector = np.asarray(vector, dtype=np.float64)
        if vector.shape != (self.dim,):
            raise StoreError(
                f"vector for {key!r} has {vector.shape[0] if vector.ndim == 1 else vector.shape} "
                f"components, store dimension is {self.dim}"
            )
        if not np.all(np.isfinite(vector)):
            raise StoreError(f"non-finite embedding component for {key!r}")
        if key in self._vectors:
            raise StoreError(f"duplicate embedding key: {key!r}")
        self._vectors[key] = vector


def load_embeddings(path: str | Path) -> EmbeddingStore:
    """Read an embedding file, validating the header and per-row arity."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise StoreError(f"cannot read {path}: {exc}") from exc
    if not lines or not lines[0].startswith("#dim="):
        raise StoreError(f"{path.name}: missing '#dim=<D>' header line")
    try:
        dim = int(lines[0][len("#dim=") :])
    except ValueError:
        raise StoreError(f"{path.name}: malformed dimension header") from None
    store = EmbeddingStore(dim)
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        if line.startswith("#"):
            continue
        fields = line.split("\t")
        key, raw_values = fields[0], fields[1:]
        if len(raw_values) != dim:
            raise StoreError(
                f"{path.name}:{lineno}: row has {len(raw_values)} values, "
                f"header says {dim}"
            )
        try:
            vector = np.array([float(v) for v in raw_values], dtype=np.float64)
        except ValueError:
            raise StoreError(f"{path.name}:{lineno}: non-numeric component") from None
        try:
            store.add(key, vector)
        except StoreError as exc:
            raise StoreError(f"{path.name}:{lineno}: {exc}") from None
    return store


def save_embeddings(
    store: EmbeddingStore, path: str | Path, comments: list[str] | None = None
) -> None:
    """Write the store in the loadable format, 9 significant digits."""
    lines = [f"#dim={store.dim}\n"]
    for comment in comments or []:
        lines.append(f"#{comment}\n")
    for key in store.keys():
        values = "\t".join(format(v, ".9g") for v in store.get(key))
        lines.append(f"{key}\t{values}\n")
    Path(path).write_text("".join(lines), encoding="utf-8", newline="\n")


class HashEmbeddingProvider:
    """Feature-hashing embeddings computed on the fly."""

    name = "hash"

    def __init__(self, dim: int = DEFAULT_DIMENSION):
        self.dim = dim

    def get_embedding(self, segment: Segment, use_context: bool = False) -> np.ndarray:
        tokens: tuple[str, ...] = segment.tokens
        if use_context:
            tokens = segment.left_context + segment.tokens + segment.right_context
        return hash_embed(tokens, self.dim)


class StoreEmbeddingProvider:
    """Embeddings looked up from a precomputed file."""

    name = "store"

    def __init__(self, store: EmbeddingStore):
        self.store = store
        self.dim = store.dim

    def get_embedding(self, segment: Segment, use_context: bool = False) -> np.ndarray:
        key = f"{segment.key}#ctx" if use_context else segment.key
        vector = self.store.get(key)
        if vector is None:
            raise StoreError(f"no stored embedding for {key!r}")
        return vector


EmbeddingProvider = HashEmbeddingProvider | StoreEmbeddingProvider


def get_embedding(
    segment: Segment, provider: EmbeddingProvider, use_context: bool = False
) -> np.ndarray:
    return provider.get_embedding(segment, use_context=use_context)
