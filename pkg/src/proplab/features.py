"""Per-segment feature bundles and the on-disk feature cache.

A bundle carries up to three blocks: the sentence embedding, the
five-dimensional emotion scores, and the word-category proportions. Which
blocks are present is fixed by the experiment condition so that ablation
runs stay feature-pure. Caches serialize floats with 17 significant
digits, so a cache hit reproduces the cold-run bundles exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .categories import CategoryLexicon, category_features
from .corpus import Segment, TechniqueLabel
from .embeddings import EmbeddingProvider
from .emotion import EmotionProvider
from .errors import SchemaError, StoreError

EMOTION_BLOCK_DIM = 5


@dataclass(frozen=True)
class ConditionSpec:
    """Which feature blocks a named experiment condition uses."""

    name: str
    use_embed: bool
    use_emotion: bool
    use_category: bool
    use_context: bool
    arch: str  # "fusion" or "logistic"


CONDITIONS: dict[str, ConditionSpec] = {
    spec.name: spec
    for spec in (
        ConditionSpec("embed-only", True, False, False, False, "fusion"),
        ConditionSpec("emotion-only", False, True, False, False, "fusion"),
        ConditionSpec("embed+emotion", True, True, False, False, "fusion"),
        ConditionSpec("embed+emotion+category", True, True, True, False, "fusion"),
        ConditionSpec("embed+emotion+context", True, True, False, True, "fusion"),
        ConditionSpec("logistic-baseline", True, True, False, False, "logistic"),
    )
}


@dataclass(frozen=True)
class FeatureSchema:
    """Provenance of a bundle set: providers, dimensions, context flag."""

    condition: str
    embed_provider: str  # "hash" | "store" | "none"
    embed_dim: int
    emotion_provider: str  # "lexicon" | "precomputed" | "none"
    category_count: int
    use_context: bool

    @property
    def emotion_dim(self) -> int:
        return EMOTION_BLOCK_DIM if self.emotion_provider != "none" else 0

    @property
    def aux_dim(self) -> int:
        return self.emotion_dim + self.category_count

    def check_compatible(self, other: "FeatureSchema") -> None:
        """Raise unless feature sets produced under ``other`` can feed a
        model trained under this schema."""
        mismatches = []
        if self.embed_dim != other.embed_dim:
            mismatches.append(f"embed_dim {other.embed_dim} != {self.embed_dim}")
        if self.emotion_dim != other.emotion_dim:
            mismatches.append(f"emotion_dim {other.emotion_dim} != {self.emotion_dim}")
        if self.category_count != other.category_count:
            mismatches.append(
                f"category_count {other.category_count} != {self.category_count}"
            )
        if self.use_context != other.use_context:
            mismatches.append(f"use_context {other.use_context} != {self.use_context}")
        if mismatches:
            raise SchemaError("feature schema mismatch: " + "; ".join(mismatches))


@dataclass(frozen=True)
class FeatureBundle:
    """One segment's feature blocks; absent blocks are zero-width arrays."""

    key: str
    embedding: np.ndarray
    emotion: np.ndarray
    category: np.ndarray

    @property
    def aux(self) -> np.ndarray:
        return np.concatenate([self.emotion, self.category])


def build_bundles(
    segments: Sequence[Segment],
    condition: str,
    embed_provider: EmbeddingProvider | None = None,
    emotion_provider: EmotionProvider | None = None,
    category_lexicon: CategoryLexicon | None = None,
) -> tuple[list[FeatureBundle], FeatureSchema]:
    """Compute the feature blocks the condition calls for, per segment.

    Context (when the condition uses it) feeds the embedding block only;
    emotion and category features always see the bare segment.
    """
    try:
        spec = CONDITIONS[condition]
    except KeyError:
        raise ValueError(
            f"unknown condition {condition!r}; expected one of "
            f"{sorted(CONDITIONS)}"
        ) from None
    if spec.use_embed and embed_provider is None:
        raise ValueError(f"condition {condition!r} needs an embedding provider")
    if spec.use_emotion and emotion_provider is None:
        raise ValueError(f"condition {condition!r} needs an emotion provider")
    if spec.use_category and category_lexicon is None:
        raise ValueError(f"condition {condition!r} needs a category dictionary")

    schema = FeatureSchema(
        condition=condition,
        embed_provider=embed_provider.name if spec.use_embed else "none",
        embed_dim=embed_provider.dim if spec.use_embed else 0,
        emotion_provider=emotion_provider.name if spec.use_emotion else "none",
        category_count=len(category_lexicon) if spec.use_category else 0,
        use_context=spec.use_context,
    )

    empty = np.zeros(0, dtype=np.float64)
    bundles = []
    for segment in segments:
        if spec.use_embed:
            embedding = embed_provider.get_embedding(
                segment, use_context=spec.use_context
            )
        else:
            embedding = empty
        if spec.use_emotion:
            emotion = np.array(
                emotion_provider.get_scores(segment).as_tuple(), dtype=np.float64
            )
        else:
            emotion = empty
        if spec.use_category:
            category = np.array(
                category_features(segment.tokens, category_lexicon), dtype=np.float64
            )
        else:
            category = empty
        bundles.append(
            FeatureBundle(
                key=segment.key, embedding=embedding, emotion=emotion, category=category
            )
        )
    return bundles, schema


_CACHE_MAGIC = "#proplab-features 1"


def save_bundles(
    bundles: Sequence[FeatureBundle],
    schema: FeatureSchema,
    golds: Sequence[TechniqueLabel | None],
    path: str | Path,
) -> None:
    """Write the feature cache; floats use 17 significant digits so the
    round trip is exact."""
    if len(bundles) != len(golds):
        raise ValueError("bundles and golds must align")
    lines = [
        _CACHE_MAGIC + "\n",
        f"#condition={schema.condition}\n",
        f"#embed_provider={schema.embed_provider}\n",
        f"#embed_dim={schema.embed_dim}\n",
        f"#emotion_provider={schema.emotion_provider}\n",
        f"#category_count={schema.category_count}\n",
        f"#use_context={'true' if schema.use_context else 'false'}\n",
    ]
    for bundle, gold in zip(bundles, golds):
        values = np.concatenate([bundle.embedding, bundle.emotion, bundle.category])
        row = [bundle.key, gold.label if gold is not None else "-"]
        row.extend(format(v, ".17g") for v in values)
        lines.append("\t".join(row) + "\n")
    Path(path).write_text("".join(lines), encoding="utf-8", newline="\n")


def load_bundles(
    path: str | Path,
) -> tuple[list[FeatureBundle], list[TechniqueLabel | None], FeatureSchema]:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise StoreError(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0] != _CACHE_MAGIC:
        raise StoreError(f"{path.name}: not a feature cache (bad magic line)")

    meta: dict[str, str] = {}
    body_start = 1
    for line in lines[1:]:
        if not line.startswith("#"):
            break
        body_start += 1
        key, _, value = line[1:].partition("=")
        meta[key] = value
    try:
        schema = FeatureSchema(
            condition=meta["condition"],
            embed_provider=meta["embed_provider"],
            embed_dim=int(meta["embed_dim"]),
            emotion_provider=meta["emotion_provider"],
            category_count=int(meta["category_count"]),
            use_context=meta["use_context"] == "true",
        )
    except (KeyError, ValueError) as exc:
        raise StoreError(f"{path.name}: incomplete cache header ({exc})") from None

    n_embed, n_emotion, n_cat = schema.embed_dim, schema.emotion_dim, schema.category_count
    expected = 2 + n_embed + n_emotion + n_cat
    bundles: list[FeatureBundle] = []
    golds: list[TechniqueLabel | None] = []
    for lineno, line in enumerate(lines[body_start:], start=body_start + 1):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != expected:
            raise StoreError(
                f"{path.name}:{lineno}: expected {expected} fields, got {len(fields)}"
            )
        key, gold_name = fields[0], fields[1]
        try:
            values = np.array([float(v) for v in fields[2:]], dtype=np.float64)
        except ValueError:
            raise StoreError(f"{path.name}:{lineno}: non-numeric feature") from None
        bundles.append(
            FeatureBundle(
                key=key,
                embedding=values[:n_embed],
                emotion=values[n_embed : n_embed + n_emotion],
                category=values[n_embed + n_emotion :],
            )
        )
        golds.append(None if gold_name == "-" else TechniqueLabel.from_name(gold_name))
    return bundles, golds, schema
