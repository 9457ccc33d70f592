"""Word-category dictionary parsing and fraction-of-tokens features."""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from proplab.categories import CategoryLexicon, category_features, load_dictionary
from proplab.errors import LexiconError

ANGER_DIC = "%\n1\tanger\n%\nhate\t1\nkill*\t1\n"

# constructed directly so the hypothesis tests below need no tmp files
ANGER_LEXICON = CategoryLexicon(
    categories=["anger"],
    exact_entries={"hate": frozenset({0})},
    prefix_entries={"kill": frozenset({0})},
)


def write_dic(tmp_path, content: str):
    path = tmp_path / "cats.dic"
    path.write_text(content, encoding="utf-8")
    return path


@pytest.fixture
def anger_lexicon(tmp_path) -> CategoryLexicon:
    return load_dictionary(write_dic(tmp_path, ANGER_DIC))


class TestLoadDictionary:
    def test_single_category(self, anger_lexicon):
        assert anger_lexicon.categories == ["anger"]
        assert anger_lexicon.exact_entries == {"hate": frozenset({0})}
        assert anger_lexicon.prefix_entries == {"kill": frozenset({0})}

    def test_entries_lowercased(self, tmp_path):
        lex = load_dictionary(write_dic(tmp_path, "%\n1\tanger\n%\nHATE\t1\n"))
        assert "hate" in lex.exact_entries

    def test_missing_separators(self, tmp_path):
        with pytest.raises(LexiconError, match="separator"):
            load_dictionary(write_dic(tmp_path, "1\tanger\nhate\t1\n"))

    def test_unknown_category_id(self, tmp_path):
        with pytest.raises(LexiconError, match="unknown category id 9"):
            load_dictionary(write_dic(tmp_path, "%\n1\tanger\n%\nhate\t9\n"))

    def test_duplicate_category_id(self, tmp_path):
        with pytest.raises(LexiconError, match="duplicate category id 1"):
            load_dictionary(write_dic(tmp_path, "%\n1\tanger\n1\tsocial\n%\nhate\t1\n"))

    def test_ids_need_not_be_contiguous(self, tmp_path):
        lex = load_dictionary(
            write_dic(tmp_path, "%\n5\tsocial\n2\tanger\n%\nhate\t2\nmate\t5\n")
        )
        # names come out sorted by id
        assert lex.categories == ["anger", "social"]
        assert lex.exact_entries["hate"] == frozenset({0})
        assert lex.exact_entries["mate"] == frozenset({1})

    def test_seventy_three_categories(self, tmp_path):
        header = "".join(f"{i}\t cat{i:02d}\n" for i in range(1, 74))
        entries = "".join(f"word{i:02d}\t{i}\n" for i in range(1, 74))
        lex = load_dictionary(write_dic(tmp_path, "%\n" + header + "%\n" + entries))
        assert len(lex) == 73
        feats = category_features(["word05", "word73", "other"], lex)
        assert len(feats) == 73
        assert feats[4] == pytest.approx(1 / 3)
        assert feats[72] == pytest.approx(1 / 3)
        assert sum(feats) == pytest.approx(2 / 3)


class TestCategoryFeatures:
    def test_exact_and_prefix_hits(self, anger_lexicon):
        # "killing" matches the kill* prefix entry, "dog" matches nothing
        assert category_features(["hate", "killing", "dog"], anger_lexicon) == [
            pytest.approx(2 / 3)
        ]

    def test_empty_tokens(self, anger_lexicon):
        assert category_features([], anger_lexicon) == [0.0]

    def test_no_hits(self, anger_lexicon):
        assert category_features(["calm", "quiet"], anger_lexicon) == [0.0]

    def test_multi_category_entry_counts_once_per_category(self, tmp_path):
        lex = load_dictionary(
            write_dic(tmp_path, "%\n1\tanger\n2\tsocial\n%\nmate\t1\t2\n")
        )
        assert category_features(["mate"], lex) == [1.0, 1.0]

    def test_exact_entry_shadows_prefix(self, tmp_path):
        # "kind" has its own entry; the kin* prefix must not also fire for it
        lex = load_dictionary(
            write_dic(tmp_path, "%\n1\tanger\n2\tsocial\n%\nkin*\t1\nkind\t2\n")
        )
        assert category_features(["kind"], lex) == [0.0, 1.0]
        assert category_features(["kinship"], lex) == [1.0, 0.0]

    def test_token_hits_category_at_most_once(self, tmp_path):
        # entry listed for the same category twice collapses to one hit
        lex = load_dictionary(write_dic(tmp_path, "%\n1\tanger\n%\nhate\t1\nhat*\t1\n"))
        assert category_features(["hate"], lex) == [1.0]

    @given(st.lists(st.sampled_from(["hate", "killing", "dog", "kill"]), max_size=20))
    def test_fractions_stay_in_unit_interval(self, tokens):
        feats = category_features(tokens, ANGER_LEXICON)
        assert all(0.0 <= f <= 1.0 for f in feats)

    @given(
        st.lists(st.sampled_from(["hate", "killing", "dog"]), min_size=1, max_size=10),
        st.randoms(),
    )
    def test_permutation_invariant(self, tokens, rnd):
        shuffled = list(tokens)
        rnd.shuffle(shuffled)
        assert category_features(shuffled, ANGER_LEXICON) == category_features(
            tokens, ANGER_LEXICON
        )
