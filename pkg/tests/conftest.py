"""Shared fixtures: a tiny on-disk corpus and score-store text blocks."""

from __future__ import annotations

from pathlib import Path

import pytest

# Six segment rows for a precomputed score store. The "0.520" trailing zero
# is deliberate: exporting must reproduce these decimal strings byte-exactly.
TABLE_STORE_ROWS = [
    ("s1:0:42", "0.305", "0.123", "0.622", "0.551", "0.483"),
    ("s2:0:19", "0.653", "0.520", "0.208", "0.183", "0.267"),
    ("s3:0:33", "0.563", "0.344", "0.332", "0.406", "0.374"),
    ("s4:0:36", "0.323", "0.126", "0.516", "0.487", "0.520"),
    ("s5:0:26", "0.456", "0.216", "0.367", "0.371", "0.418"),
    ("t1:0:24", "0.672", "0.592", "0.264", "0.201", "0.286"),
]

STORE_HEADER = "key\tvalence\tjoy\tanger\tfear\tsadness\n"


@pytest.fixture
def store_file(tmp_path: Path) -> Path:
    path = tmp_path / "scores.tsv"
    body = "".join("\t".join(row) + "\n" for row in TABLE_STORE_ROWS)
    path.write_text(STORE_HEADER + body, encoding="utf-8", newline="\n")
    return path


@pytest.fixture
def tiny_corpus(tmp_path: Path) -> dict:
    """Two articles; four gold rows, one span carrying two labels."""
    text_a = 'Leaders spoke. "Make America great again!" they chanted, waving flags.\n'
    text_b = "Analysts call the plan a total disaster for everyone involved.\n"
    articles = tmp_path / "articles"
    articles.mkdir()
    (articles / "article111111112.txt").write_text(text_a, encoding="utf-8")
    (articles / "article738361208.txt").write_text(text_b, encoding="utf-8")

    slogan_start = text_a.index("Make")
    slogan_end = text_a.index("!") + 1
    flag_start = text_a.index("waving")
    flag_end = text_a.index("flags.") + len("flags")
    multi_start = text_b.index("a total disaster")
    multi_end = multi_start + len("a total disaster")
    rows = [
        f"111111112\tslogans\t{slogan_start}\t{slogan_end}",
        f"111111112\tflag waving\t{flag_start}\t{flag_end}",
        # one span, two gold labels
        f"738361208\texaggeration,minimisation\t{multi_start}\t{multi_end}",
        f"738361208\tloaded language\t{multi_start}\t{multi_end}",
    ]
    labels = tmp_path / "labels.tsv"
    labels.write_text("\n".join(rows) + "\n", encoding="utf-8", newline="\n")
    return {
        "articles_dir": articles,
        "labels_path": labels,
        "text_a": text_a,
        "text_b": text_b,
        "spans": {
            "slogan": (111111112, slogan_start, slogan_end),
            "flag": (111111112, flag_start, flag_end),
            "multi": (738361208, multi_start, multi_end),
        },
    }
