"""Five-dimensional emotion-intensity features for text segments.

Scores cover valence, joy, anger, fear and sadness, each in [0, 1]. Three
interchangeable providers produce them: a token lexicon (average over
matched tokens), a precomputed per-segment store loaded from disk, and the
HTTP client in :mod:`proplab.score_client` which fills such a store.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .corpus import Segment
from .errors import LexiconError, StoreError

EMOTION_DIMENSIONS: tuple[str, ...] = ("valence", "joy", "anger", "fear", "sadness")

# Stand-in scores for text with no lexicon coverage: midpoint valence,
# uniformly low emotion intensities.
NEUTRAL_SCORES: tuple[float, ...] = (0.5, 0.2, 0.2, 0.2, 0.2)


@dataclass(frozen=True)
class EmotionScores:
    valence: float
    joy: float
    anger: float
    fear: float
    sadness: float

    def __post_init__(self) -> None:
        for name, value in zip(EMOTION_DIMENSIONS, self.as_tuple()):
            if math.isnan(value) or not 0.0 <= value <= 1.0:
                raise StoreError(f"{name} score {value!r} outside [0, 1]")

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.valence, self.joy, self.anger, self.fear, self.sadness)


NEUTRAL = EmotionScores(*NEUTRAL_SCORES)


class EmotionLexicon:
    """token -> EmotionScores map; terms are stored lowercased."""

    def __init__(self, entries: dict[str, EmotionScores]):
        self._entries = {term.lower(): scores for term, scores in entries.items()}

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, token: str) -> bool:
        return token in self._entries

    def get(self, token: str) -> EmotionScores | None:
        return self._entries.get(token)

    @classmethod
    def load(cls, path: str | Path) -> "EmotionLexicon":
        rows = _read_score_rows(path, key_column="term")
        return cls({term: scores for term, (scores, _raw) in rows.items()})


def score_with_lexicon(tokens: list[str] | tuple[str, ...], lexicon: EmotionLexicon) -> EmotionScores:
    """Average each dimension over tokens present in the lexicon.

    Tokens the lexicon does not know are skipped; when nothing matches the
    neutral stand-in scores are returned.
    """
    sums = [0.0] * 5
    matched = 0
    for token in tokens:
        scores = lexicon.get(token)
        if scores is None:
            continue
        matched += 1
        for i, value in enumerate(scores.as_tuple()):
            sums[i] += value
    if matched == 0:
        return NEUTRAL
    return EmotionScores(*(s / matched for s in sums))


class PrecomputedEmotionStore:
    """Per-segment scores keyed by ``Segment.key``.

    The decimal strings from the source file are retained so that a
    load -> export round trip is byte-identical.
    """

    def __init__(self) -> None:
        self._scores: dict[str, EmotionScores] = {}
        self._raw: dict[str, tuple[str, ...]] = {}

    def __len__(self) -> int:
        return len(self._scores)

    def __contains__(self, key: str) -> bool:
        return key in self._scores

    def keys(self):
        return self._scores.keys()

    def get(self, key: str) -> EmotionScores | None:
        return self._scores.get(key)

    def add(self, key: str, scores: EmotionScores, raw: tuple[str, ...] | None = None) -> None:
        if key in self._scores:
            raise StoreError(f"duplicate store key: {key!r}")
        self._scores[key] = scores
        self._raw[key] = raw if raw is not None else tuple(
            repr(v) for v in scores.as_tuple()
        )

    def export(self, path: str | Path) -> None:
        lines = ["key\t" + "\t".join(EMOTION_DIMENSIONS) + "\n"]
        for key, raw in self._raw.items():
            lines.append(key + "\t" + "\t".join(raw) + "\n")
        Path(path).write_text("".join(lines), encoding="utf-8", newline="\n")


def load_precomputed(path: str | Path) -> PrecomputedEmotionStore:
    """Load a score store TSV (header ``key valence joy anger fear sadness``)."""
    rows = _read_score_rows(path, key_column="key")
    store = PrecomputedEmotionStore()
    for key, (scores, raw) in rows.items():
        store.add(key, scores, raw)
    return store


def _read_score_rows(
    path: str | Path, key_column: str
) -> dict[str, tuple[EmotionScores, tuple[str, ...]]]:
    path = Path(path)
    err = LexiconError if key_column == "term" else StoreError
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise err(f"cannot read {path}: {exc}") from exc
    lines = content.splitlines()
    expected_header = [key_column, *EMOTION_DIMENSIONS]
    if not lines or lines[0].split("\t") != expected_header:
        raise err(f"{path.name}: missing header {' '.join(expected_header)!r}")
    rows: dict[str, tuple[EmotionScores, tuple[str, ...]]] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 6:
            raise err(f"{path.name}:{lineno}: expected 6 fields, got {len(fields)}")
        key, *raw = fields
        try:
            values = [float(v) for v in raw]
        except ValueError:
            raise err(f"{path.name}:{lineno}: non-numeric score") from None
        try:
            scores = EmotionScores(*values)
        except StoreError as exc:
            raise err(f"{path.name}:{lineno}: {exc}") from None
        if key in rows:
            raise err(f"{path.name}:{lineno}: duplicate key {key!r}")
        rows[key] = (scores, tuple(raw))
    return rows


class LexiconEmotionProvider:
    """Scores a segment by averaging its tokens through the lexicon."""

    name = "lexicon"

    def __init__(self, lexicon: EmotionLexicon):
        self._lexicon = lexicon

    def get_scores(self, segment: Segment) -> EmotionScores:
        return score_with_lexicon(segment.tokens, self._lexicon)


class PrecomputedEmotionProvider:
    """Looks a segment up by key; misses are errors unless a fallback
    provider is configured (silent fallback would blur feature ablations)."""

    name = "precomputed"

    def __init__(
        self,
        store: PrecomputedEmotionStore,
        fallback: LexiconEmotionProvider | None = None,
    ):
        self._store = store
        self._fallback = fallback

    def get_scores(self, segment: Segment) -> EmotionScores:
        scores = self._store.get(segment.key)
        if scores is not None:
            return scores
        if self._fallback is not None:
            return self._fallback.get_scores(segment)
        raise StoreError(f"no precomputed emotion scores for segment {segment.key!r}")


EmotionProvider = LexiconEmotionProvider | PrecomputedEmotionProvider


def get_scores(segment: Segment, provider: EmotionProvider) -> EmotionScores:
    return provider.get_scores(segment)
