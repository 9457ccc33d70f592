"""Word-category features from a LIWC-style dictionary file.

The dictionary format is::

    %
    1<TAB>anger
    2<TAB>social
    %
    hate<TAB>1
    kill*<TAB>1
    mate<TAB>1<TAB>2

Categories are listed between the two ``%`` separator lines; entry tokens
follow, each naming the category ids it belongs to. A trailing ``*`` makes
an entry match every token it prefixes. The feature vector holds, per
category, the fraction of tokens hitting any of its entries. Dictionary
content is user-supplied; only the format is fixed here.
"""

from __future__ import annotations

from pathlib import Path

from .errors import LexiconError


class CategoryLexicon:
    """Parsed dictionary: ordered category names plus exact/prefix entries."""

    def __init__(
        self,
        categories: list[str],
        exact_entries: dict[str, frozenset[int]],
        prefix_entries: dict[str, frozenset[int]],
    ):
        self.categories = list(categories)
        self.exact_entries = dict(exact_entries)
        self.prefix_entries = dict(prefix_entries)
        for entries in (self.exact_entries, self.prefix_entries):
            for token, ids in entries.items():
                bad = [i for i in ids if not 0 <= i < len(self.categories)]
                if bad:
                    raise LexiconError(
                        f"entry {token!r} references category index {bad[0]} "
                        f"out of range"
                    )

    def __len__(self) -> int:
        return len(self.categories)

    def categories_for(self, token: str) -> frozenset[int]:
        """Category indices a token activates: its exact entry if present,
        otherwise the longest prefix entry."""
        exact = self.exact_entries.get(token)
        if exact is not None:
            return exact
        for length in range(len(token), -1, -1):
            hit = self.prefix_entries.get(token[:length])
            if hit is not None:
                return hit
        return frozenset()


def load_dictionary(path: str | Path) -> CategoryLexicon:
    """Parse a LIWC-style ``.dic`` file into a :class:`CategoryLexicon`."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise LexiconError(f"cannot read {path}: {exc}") from exc

    separators = [i for i, line in enumerate(lines) if line.strip() == "%"]
    if len(separators) < 2:
        raise LexiconError(f"{path.name}: expected two '%' separator lines")
    first, second = separators[0], separators[1]

    id_to_name: dict[int, str] = {}
    for lineno, line in enumerate(lines[first + 1 : second], start=first + 2):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise LexiconError(f"{path.name}:{lineno}: expected 'id<TAB>name'")
        try:
            cat_id = int(fields[0])
        except ValueError:
            raise LexiconError(f"{path.name}:{lineno}: non-integer category id") from None
        if cat_id in id_to_name:
            raise LexiconError(f"{path.name}:{lineno}: duplicate category id {cat_id}")
        id_to_name[cat_id] = fields[1].strip()

    ordered_ids = sorted(id_to_name)
    index_of = {cat_id: i for i, cat_id in enumerate(ordered_ids)}

    exact: dict[str, set[int]] = {}
    prefix: dict[str, set[int]] = {}
    for lineno, line in enumerate(lines[second + 1 :], start=second + 2):
        if not line.strip():
            continue
        fields = line.split("\t")
        token = fields[0].strip().lower()
        if not token:
            raise LexiconError(f"{path.name}:{lineno}: empty entry token")
        try:
            ids = [int(f) for f in fields[1:] if f.strip()]
        except ValueError:
            raise LexiconError(f"{path.name}:{lineno}: non-integer category id") from None
        if not ids:
            raise LexiconError(f"{path.name}:{lineno}: entry names no categories")
        for cat_id in ids:
            if cat_id not in index_of:
                raise LexiconError(
                    f"{path.name}:{lineno}: entry {token!r} references "
                    f"unknown category id {cat_id}"
                )
        indices = {index_of[i] for i in ids}
        if token.endswith("*"):
            prefix.setdefault(token[:-1], set()).update(indices)
        else:
            exact.setdefault(token, set()).update(indices)

    return CategoryLexicon(
        categories=[id_to_name[i] for i in ordered_ids],
        exact_entries={t: frozenset(s) for t, s in exact.items()},
        prefix_entries={t: frozenset(s) for t, s in prefix.items()},
    )


def category_features(
    tokens: list[str] | tuple[str, ...], lexicon: CategoryLexicon
) -> list[float]:
    """Fraction of tokens hitting each category, in category order."""
    counts = [0] * len(lexicon)
    for token in tokens:
        for index in lexicon.categories_for(token):
            counts[index] += 1
    denom = max(1, len(tokens))
    return [c / denom for c in counts]
