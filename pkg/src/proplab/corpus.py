"""Span-annotated news corpus: articles, technique labels, segment extraction.

Articles live in one UTF-8 file per article (``article<ID>.txt``); gold
annotations are tab-separated rows of ``article_id, technique, span_start,
span_end``. Offsets count Unicode code points on the raw article text; the
extracted span is cleaned and tokenized afterwards.
"""

from __future__ import annotations

import enum
import re
import unicodedata
from dataclasses import dataclass
from pathlib import Path

from .errors import CorpusError

# The fourteen technique names, most frequent first. Index order is part of
# the model contract (class indices, checkpoint layout) and must not change.
TECHNIQUE_NAMES: tuple[str, ...] = (
    "loaded language",
    "name calling,labeling",
    "repetition",
    "flag waving",
    "exaggeration,minimisation",
    "doubt",
    "appeal to fear-prejudice",
    "slogans",
    "whataboutism,straw men,red herring",
    "black-and-white fallacy",
    "appeal to authority",
    "causal oversimplification",
    "bandwagon,reductio_ad_hitlerum",
    "thought-terminating cliches",
)

N_TECHNIQUES = len(TECHNIQUE_NAMES)


class TechniqueLabel(enum.IntEnum):
    """One of the fourteen propaganda techniques, indexed 0-13."""

    LOADED_LANGUAGE = 0
    NAME_CALLING_LABELING = 1
    REPETITION = 2
    FLAG_WAVING = 3
    EXAGGERATION_MINIMISATION = 4
    DOUBT = 5
    APPEAL_TO_FEAR_PREJUDICE = 6
    SLOGANS = 7
    WHATABOUTISM_STRAW_MEN_RED_HERRING = 8
    BLACK_AND_WHITE_FALLACY = 9
    APPEAL_TO_AUTHORITY = 10
    CAUSAL_OVERSIMPLIFICATION = 11
    BANDWAGON_REDUCTIO_AD_HITLERUM = 12
    THOUGHT_TERMINATING_CLICHES = 13

    @property
    def label(self) -> str:
        return TECHNIQUE_NAMES[self]

    @classmethod
    def from_name(cls, name: str) -> "TechniqueLabel":
        try:
            return _NAME_TO_LABEL[name]
        except KeyError:
            raise CorpusError(f"unknown propaganda technique: {name!r}") from None


_NAME_TO_LABEL = {name: TechniqueLabel(i) for i, name in enumerate(TECHNIQUE_NAMES)}

# Punctuation replaced with spaces during tokenization (the classic Keras
# filter set); apostrophes are deliberately kept inside tokens.
TOKEN_FILTER_CHARS = '!"#$%&()*+,-./:;<=>?@[\\]^_`{|}~\t\n'
_FILTER_TABLE = str.maketrans({c: " " for c in TOKEN_FILTER_CHARS})

_ARTICLE_FILE_RE = re.compile(r"^article(\d+)\.txt$", re.IGNORECASE)


@dataclass(frozen=True)
class Article:
    """A raw news article."""

    id: int
    text: str

    def __post_init__(self) -> None:
        if len(self.text) < 1:
            raise CorpusError(f"article {self.id} is empty")


@dataclass(frozen=True)
class SpanAnnotation:
    """A gold technique label over a character span of one article."""

    article_id: int
    technique: TechniqueLabel
    span_start: int
    span_end: int

    def __post_init__(self) -> None:
        if self.span_start < 0 or self.span_start >= self.span_end:
            raise CorpusError(
                f"invalid span [{self.span_start}, {self.span_end}) "
                f"for article {self.article_id}"
            )

    @property
    def key(self) -> str:
        return segment_key(self.article_id, self.span_start, self.span_end)


@dataclass(frozen=True)
class Segment:
    """An extracted, cleaned span with up to ``window`` context tokens per side."""

    key: str
    surface: str
    tokens: tuple[str, ...]
    left_context: tuple[str, ...] = ()
    right_context: tuple[str, ...] = ()
    gold: TechniqueLabel | None = None


def segment_key(article_id: int, span_start: int, span_end: int) -> str:
    return f"{article_id}:{span_start}:{span_end}"


def parse_segment_key(key: str) -> tuple[int, int, int]:
    parts = key.split(":")
    if len(parts) != 3:
        raise CorpusError(f"malformed segment key: {key!r}")
    try:
        article_id, start, end = (int(p) for p in parts)
    except ValueError:
        raise CorpusError(f"malformed segment key: {key!r}") from None
    return article_id, start, end


def clean_text(s: str) -> str:
    """Normalize whitespace: drop control chars (tab/newline become spaces),
    collapse space runs, trim."""
    out = []
    for ch in s:
        if ch in "\t\n":
            out.append(" ")
        elif unicodedata.category(ch) == "Cc":
            continue
        else:
            out.append(ch)
    return re.sub("  +", " ", "".join(out)).strip(" ")


def tokenize(s: str) -> list[str]:
    """Lowercase, strip punctuation/control characters, split on whitespace.

    Invariant relied on elsewhere: ``tokenize(clean_text(s)) == tokenize(s)``,
    so control characters are dropped here exactly as ``clean_text`` does.
    """
    kept = "".join(
        ch for ch in s if ch in "\t\n" or unicodedata.category(ch) != "Cc"
    )
    return kept.lower().translate(_FILTER_TABLE).split()


def load_corpus(directory: str | Path) -> list[Article]:
    """Load every ``article<ID>.txt`` under ``directory``, ascending by id."""
    directory = Path(directory)
    if not directory.is_dir():
        raise CorpusError(f"not a directory: {directory}")
    found: dict[int, Path] = {}
    for path in directory.iterdir():
        m = _ARTICLE_FILE_RE.match(path.name)
        if not m:
            continue
        article_id = int(m.group(1))
        if article_id in found:
            raise CorpusError(
                f"duplicate article id {article_id}: {found[article_id].name} "
                f"and {path.name}"
            )
        found[article_id] = path
    articles = []
    for article_id in sorted(found):
        path = found[article_id]
        try:
            text = path.read_text(encoding="utf-8")
        except UnicodeDecodeError as exc:
            raise CorpusError(f"{path.name} is not valid UTF-8: {exc}") from exc
        except OSError as exc:
            raise CorpusError(f"cannot read {path.name}: {exc}") from exc
        articles.append(Article(id=article_id, text=text))
    return articles


def load_annotations(path: str | Path) -> list[SpanAnnotation]:
    """Parse the gold TSV. Rows sharing a span but naming different
    techniques are all kept (multi-label spans)."""
    path = Path(path)
    annotations = []
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(content.splitlines(), start=1):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise CorpusError(
                f"{path.name}:{lineno}: expected 4 tab-separated fields, "
                f"got {len(fields)}"
            )
        raw_id, technique_name, raw_start, raw_end = fields
        try:
            article_id, start, end = int(raw_id), int(raw_start), int(raw_end)
        except ValueError:
            raise CorpusError(f"{path.name}:{lineno}: non-integer field") from None
        technique = TechniqueLabel.from_name(technique_name)
        try:
            annotations.append(SpanAnnotation(article_id, technique, start, end))
        except CorpusError as exc:
            raise CorpusError(f"{path.name}:{lineno}: {exc}") from None
    return annotations


def save_annotations(annotations: list[SpanAnnotation], path: str | Path) -> None:
    """Write annotations back out in the gold TSV format (LF endings)."""
    lines = [
        f"{a.article_id}\t{a.technique.label}\t{a.span_start}\t{a.span_end}\n"
        for a in annotations
    ]
    Path(path).write_text("".join(lines), encoding="utf-8", newline="\n")


def extract_segment(
    article: Article,
    annotation: SpanAnnotation,
    context_window: int = 3,
) -> Segment:
    """Cut the annotated span out of the raw text and attach context tokens.

    Offsets are resolved on the raw article; cleaning applies to the
    extracted pieces only. Context is the closest ``context_window`` tokens
    of the text before/after the span.
    """
    if annotation.article_id != article.id:
        raise CorpusError(
            f"annotation for article {annotation.article_id} "
            f"applied to article {article.id}"
        )
    if context_window < 0:
        raise ValueError("context_window must be >= 0")
    start, end = annotation.span_start, annotation.span_end
    if end > len(article.text):
        raise CorpusError(
            f"span [{start}, {end}) out of range for article {article.id} "
            f"of length {len(article.text)}"
        )
    surface = clean_text(article.text[start:end])
    left = tokenize(article.text[:start])
    right = tokenize(article.text[end:])
    return Segment(
        key=annotation.key,
        surface=surface,
        tokens=tuple(tokenize(surface)),
        left_context=tuple(left[-context_window:] if context_window else ()),
        right_context=tuple(right[:context_window]),
        gold=annotation.technique,
    )


def extract_segments(
    articles: list[Article],
    annotations: list[SpanAnnotation],
    context_window: int = 3,
) -> list[Segment]:
    """Extract one segment per annotation row, in annotation order."""
    by_id = {a.id: a for a in articles}
    segments = []
    for ann in annotations:
        if ann.article_id not in by_id:
            raise CorpusError(f"annotation references unknown article {ann.article_id}")
        segments.append(extract_segment(by_id[ann.article_id], ann, context_window))
    return segments
