"""Deterministic synthetic corpus for end-to-end exercises.

Builds a balanced 14-class corpus whose segments carry class-specific
marker tokens (so hashed embeddings separate the classes) plus a matching
emotion lexicon in which the first class's markers score high on anger and
low on valence — giving training pipelines something learnable and the
correlation table a known sign pattern to find.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import (
    Article,
    SpanAnnotation,
    TechniqueLabel,
    save_annotations,
)
from .emotion import EMOTION_DIMENSIONS, EmotionLexicon, EmotionScores

FILLER_WORDS: tuple[str, ...] = (
    "the", "a", "of", "to", "and", "in", "on", "for", "with", "as", "at", "it",
)

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class SyntheticCorpus:
    articles: list[Article]
    annotations: list[SpanAnnotation]
    lexicon_entries: dict[str, EmotionScores]

    def emotion_lexicon(self) -> EmotionLexicon:
        return EmotionLexicon(self.lexicon_entries)


def class_markers(label: TechniqueLabel, n_markers: int) -> tuple[str, ...]:
    """Marker tokens for one class, e.g. ``cue03a`` .. ``cue03f``."""
    if not 1 <= n_markers <= len(_LETTERS):
        raise ValueError(f"n_markers must be in [1, {len(_LETTERS)}]")
    return tuple(f"cue{label.value:02d}{_LETTERS[j]}" for j in range(n_markers))


def build_synthetic_corpus(
    n_per_class: int = 200,
    *,
    markers_per_class: int = 6,
    markers_per_segment: int = 5,
    fillers_per_segment: int = 3,
    seed: int = 0,
) -> SyntheticCorpus:
    """One article per class; each line is one annotated segment.

    Every segment mixes ``markers_per_segment`` tokens drawn from its
    class's marker pool with common filler words. Lexicon entries exist for
    the markers only, so a segment's lexicon score is the mean over its
    markers: hot anger / low valence for ``loaded language``, mid-range for
    every other class.
    """
    rng = np.random.default_rng(seed)
    lexicon_entries: dict[str, EmotionScores] = {}
    marker_pools: list[tuple[str, ...]] = []
    for label in TechniqueLabel:
        pool = class_markers(label, markers_per_class)
        marker_pools.append(pool)
        for term in pool:
            if label is TechniqueLabel.LOADED_LANGUAGE:
                scores = EmotionScores(
                    valence=rng.uniform(0.02, 0.15),
                    joy=rng.uniform(0.02, 0.15),
                    anger=rng.uniform(0.85, 0.98),
                    fear=rng.uniform(0.40, 0.70),
                    sadness=rng.uniform(0.40, 0.70),
                )
            else:
                scores = EmotionScores(
                    valence=rng.uniform(0.40, 0.80),
                    joy=rng.uniform(0.35, 0.65),
                    anger=rng.uniform(0.05, 0.35),
                    fear=rng.uniform(0.20, 0.50),
                    sadness=rng.uniform(0.20, 0.50),
                )
            lexicon_entries[term] = scores

    articles: list[Article] = []
    annotations: list[SpanAnnotation] = []
    for label in TechniqueLabel:
        pool = marker_pools[label.value]
        lines = []
        for _ in range(n_per_class):
            words = [
                pool[i]
                for i in rng.integers(0, markers_per_class, markers_per_segment)
            ]
            words += [
                FILLER_WORDS[i]
                for i in rng.integers(0, len(FILLER_WORDS), fillers_per_segment)
            ]
            order = rng.permutation(len(words))
            lines.append(" ".join(words[i] for i in order))
        article_id = label.value + 1
        articles.append(Article(id=article_id, text="\n".join(lines) + "\n"))
        offset = 0
        for line in lines:
            annotations.append(
                SpanAnnotation(article_id, label, offset, offset + len(line))
            )
            offset += len(line) + 1
    return SyntheticCorpus(articles, annotations, lexicon_entries)


def write_lexicon(entries: dict[str, EmotionScores], path: str | Path) -> None:
    lines = ["term\t" + "\t".join(EMOTION_DIMENSIONS) + "\n"]
    for term, scores in entries.items():
        values = "\t".join(f"{v:.6f}" for v in scores.as_tuple())
        lines.append(f"{term}\t{values}\n")
    Path(path).write_text("".join(lines), encoding="utf-8", newline="\n")


def write_corpus_files(
    corpus: SyntheticCorpus, directory: str | Path
) -> tuple[Path, Path, Path]:
    """Materialize the corpus on disk: articles dir, gold TSV, lexicon TSV."""
    directory = Path(directory)
    articles_dir = directory / "articles"
    articles_dir.mkdir(parents=True, exist_ok=True)
    for article in corpus.articles:
        (articles_dir / f"article{article.id}.txt").write_text(
            article.text, encoding="utf-8", newline="\n"
        )
    labels_path = directory / "labels.tsv"
    save_annotations(corpus.annotations, labels_path)
    lexicon_path = directory / "emotion-lexicon.tsv"
    write_lexicon(corpus.lexicon_entries, lexicon_path)
    return articles_dir, labels_path, lexicon_path
