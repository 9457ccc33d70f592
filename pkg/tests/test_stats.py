"""Kendall tau-b: brute-force oracle, scipy cross-check, table rendering."""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from proplab.corpus import TECHNIQUE_NAMES, Segment, TechniqueLabel
from proplab.emotion import EmotionScores
from proplab.errors import DegenerateDataError
from proplab.stats import CorrelationResult, CorrelationTable, correlation_table, kendall_tau_b

scipy_stats = pytest.importorskip("scipy.stats")


def brute_force_tau_b(x, y):
    """O(n^2) oracle straight from the textbook definition.

    Counts concordant/discordant pairs one at a time and applies the
    tie-corrected denominator sqrt((n0 - t_x)(n0 - t_y)).
    """
    n = len(x)
    concordant = discordant = 0
    for i, j in combinations(range(n), 2):
        prod = (x[i] - x[j]) * (y[i] - y[j])
        if prod > 0:
            concordant += 1
        elif prod < 0:
            discordant += 1
    n0 = n * (n - 1) / 2

    def tie_pairs(values):
        seen: dict[float, int] = {}
        for v in values:
            seen[v] = seen.get(v, 0) + 1
        return sum(c * (c - 1) / 2 for c in seen.values())

    denom = math.sqrt((n0 - tie_pairs(x)) * (n0 - tie_pairs(y)))
    return (concordant - discordant) / denom


class TestKendallTauB:
    def test_perfect_agreement(self):
        result = kendall_tau_b([0.0, 1.0], [0.1, 0.9])
        assert result.tau == 1.0
        assert result.n == 2

    def test_perfect_reversal(self):
        assert kendall_tau_b([0.0, 1.0], [0.9, 0.1]).tau == -1.0

    def test_five_point_fixture_against_oracle(self):
        x = [1.0, 1.0, 0.0, 0.0, 0.0]
        y = [0.9, 0.7, 0.6, 0.2, 0.2]
        result = kendall_tau_b(x, y)
        assert result.tau == pytest.approx(brute_force_tau_b(x, y), abs=1e-12)

    def test_random_datasets_against_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(25):
            n = int(rng.integers(3, 40))
            # heavy ties: values drawn from a small grid
            x = rng.integers(0, 4, size=n).astype(float)
            y = rng.integers(0, 5, size=n).astype(float)
            if np.unique(x).size < 2 or np.unique(y).size < 2:
                continue
            got = kendall_tau_b(x, y)
            assert got.tau == pytest.approx(brute_force_tau_b(list(x), list(y)), abs=1e-12)

    def test_matches_scipy_tau_and_p(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(5, 60))
            x = rng.integers(0, 2, size=n).astype(float)
            y = np.round(rng.uniform(size=n), 1)
            if np.unique(x).size < 2 or np.unique(y).size < 2:
                continue
            got = kendall_tau_b(x, y)
            want = scipy_stats.kendalltau(x, y)
            assert got.tau == pytest.approx(want.statistic, abs=1e-12)
            assert got.p_value == pytest.approx(want.pvalue, rel=1e-9)

    def test_constant_input_is_an_error(self):
        with pytest.raises(DegenerateDataError):
            kendall_tau_b([1.0, 1.0, 1.0], [0.1, 0.2, 0.3])
        with pytest.raises(DegenerateDataError):
            kendall_tau_b([0.0, 1.0, 0.0], [0.5, 0.5, 0.5])

    def test_too_short(self):
        with pytest.raises(DegenerateDataError):
            kendall_tau_b([1.0], [0.5])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            kendall_tau_b([1.0, 0.0], [0.5])

    @given(
        st.lists(
            st.floats(min_value=0, max_value=1, allow_nan=False, width=32),
            min_size=4,
            max_size=25,
        )
    )
    @settings(max_examples=50)
    def test_negating_y_negates_tau(self, y):
        x = [float(i % 2) for i in range(len(y))]
        if len(set(y)) < 2:
            return
        plus = kendall_tau_b(x, y)
        minus = kendall_tau_b(x, [-v for v in y])
        assert minus.tau == pytest.approx(-plus.tau, abs=1e-12)
        assert minus.p_value == pytest.approx(plus.p_value, rel=1e-12)

    @given(
        st.lists(st.integers(0, 50).map(lambda i: i / 50), min_size=4, max_size=20)
    )
    @settings(max_examples=50)
    def test_monotone_transform_invariance(self, y):
        # grid-valued y keeps exp() injective, so the tie structure survives
        x = [float(i % 2) for i in range(len(y))]
        if len(set(y)) < 2:
            return
        base = kendall_tau_b(x, y)
        squeezed = kendall_tau_b(x, [math.exp(v) for v in y])
        assert squeezed.tau == pytest.approx(base.tau, abs=1e-12)

    @given(
        st.lists(st.integers(0, 3), min_size=3, max_size=15),
        st.lists(st.integers(0, 3), min_size=3, max_size=15),
    )
    @settings(max_examples=80)
    def test_tau_bounded(self, x, y):
        n = min(len(x), len(y))
        x, y = [float(v) for v in x[:n]], [float(v) for v in y[:n]]
        if len(set(x)) < 2 or len(set(y)) < 2:
            return
        assert abs(kendall_tau_b(x, y).tau) <= 1.0 + 1e-12


class TestPermutationP:
    def test_exhaustive_matches_direct_enumeration(self):
        x = [1.0, 1.0, 0.0, 0.0, 0.0]
        y = [0.9, 0.7, 0.6, 0.2, 0.2]
        got = kendall_tau_b(x, y, p_method="permutation")
        # n=5 -> all 120 orderings enumerated; denominator is exact
        assert got.p_value * 120 == pytest.approx(round(got.p_value * 120))

    def test_exhaustive_sane_for_perfect_pair(self):
        # for [0,1] vs [lo,hi] half of the 2 orderings reach |tau| = 1
        got = kendall_tau_b([0.0, 1.0], [0.1, 0.9], p_method="permutation")
        assert got.p_value == 1.0

    def test_monte_carlo_is_seeded(self):
        rng = np.random.default_rng(3)
        x = rng.integers(0, 2, size=20).astype(float)
        y = rng.uniform(size=20)
        a = kendall_tau_b(x, y, p_method="permutation", permutation_rounds=500, seed=11)
        b = kendall_tau_b(x, y, p_method="permutation", permutation_rounds=500, seed=11)
        c = kendall_tau_b(x, y, p_method="permutation", permutation_rounds=500, seed=12)
        assert a.p_value == b.p_value
        assert a.p_value != c.p_value or a.tau == b.tau  # tau never depends on seed

    def test_monte_carlo_tracks_normal_p(self):
        rng = np.random.default_rng(5)
        x = rng.integers(0, 2, size=25).astype(float)
        y = x + rng.normal(scale=0.6, size=25)
        normal = kendall_tau_b(x, y)
        perm = kendall_tau_b(x, y, p_method="permutation", permutation_rounds=4000)
        assert perm.p_value == pytest.approx(normal.p_value, abs=0.05)

    def test_large_n_rejected(self):
        x = [float(i % 2) for i in range(31)]
        y = [float(i) for i in range(31)]
        with pytest.raises(ValueError, match="n <= 30"):
            kendall_tau_b(x, y, p_method="permutation")

    def test_unknown_method(self):
        with pytest.raises(ValueError, match="p_method"):
            kendall_tau_b([0.0, 1.0], [0.1, 0.9], p_method="bootstrap")


class TestStars:
    def test_thresholds(self):
        assert CorrelationResult(0.5, 0.009, 10).stars == "**"
        assert CorrelationResult(0.5, 0.01, 10).stars == "*"
        assert CorrelationResult(0.5, 0.049, 10).stars == "*"
        assert CorrelationResult(0.5, 0.05, 10).stars == ""
        assert CorrelationResult(0.5, 0.9, 10).stars == ""


def _labeled_segments(labels: list[int]) -> list[Segment]:
    return [
        Segment(
            key=f"1:{i}:{i + 1}",
            surface="w",
            tokens=("w",),
            gold=TechniqueLabel(label),
        )
        for i, label in enumerate(labels)
    ]


def _scores(rows: list[tuple[float, float, float, float, float]]) -> list[EmotionScores]:
    return [EmotionScores(*row) for row in rows]


class TestCorrelationTable:
    def test_grid_is_complete(self):
        rng = np.random.default_rng(0)
        labels = [int(v) for v in rng.integers(0, 14, size=80)]
        rows = [tuple(rng.uniform(size=5)) for _ in range(80)]
        table = correlation_table(_labeled_segments(labels), _scores(rows))
        assert len(table.cells) == 14 * 5
        assert table.n == 80

    def test_loaded_language_anger_cell(self):
        # anger high exactly on loaded-language rows -> strongly positive tau
        labels = [0, 0, 0, 1, 2, 3]
        rows = [
            (0.5, 0.5, 0.9, 0.5, 0.5),
            (0.5, 0.5, 0.8, 0.5, 0.5),
            (0.5, 0.5, 0.95, 0.5, 0.5),
            (0.5, 0.5, 0.1, 0.5, 0.5),
            (0.5, 0.5, 0.2, 0.5, 0.5),
            (0.5, 0.5, 0.15, 0.5, 0.5),
        ]
        table = correlation_table(_labeled_segments(labels), _scores(rows))
        cell = table.get(TechniqueLabel.LOADED_LANGUAGE, "anger")
        assert cell is not None
        # binary indicator [1,1,1,0,0,0] vs those anger scores, by hand
        indicator = [1.0, 1.0, 1.0, 0.0, 0.0, 0.0]
        anger = [row[2] for row in rows]
        assert cell.tau == pytest.approx(brute_force_tau_b(indicator, anger), abs=1e-12)
        assert cell.tau > 0.7

    def test_absent_technique_renders_na(self):
        labels = [0, 0, 1, 1]
        rows = [(0.1, 0.2, 0.3, 0.4, 0.5)] * 2 + [(0.9, 0.8, 0.7, 0.6, 0.5)] * 2
        table = correlation_table(_labeled_segments(labels), _scores(rows))
        # technique 5 never occurs -> indicator constant -> degenerate
        assert table.get(TechniqueLabel(5), "valence") is None
        assert "n/a" in table.format_text()

    def test_constant_dimension_renders_na(self):
        labels = [0, 1, 0, 1]
        rows = [(0.1, 0.5, 0.3, 0.4, 0.2), (0.9, 0.5, 0.7, 0.6, 0.8)] * 2
        table = correlation_table(_labeled_segments(labels), _scores(rows))
        assert table.get(TechniqueLabel(0), "joy") is None
        assert table.get(TechniqueLabel(0), "valence") is not None

    def test_format_text_shape(self):
        labels = [0, 1] * 5
        rng = np.random.default_rng(1)
        rows = [tuple(rng.uniform(size=5)) for _ in range(10)]
        text = correlation_table(_labeled_segments(labels), _scores(rows)).format_text()
        lines = text.splitlines()
        assert len(lines) == 1 + 14 + 1  # header, one per technique, footer
        assert lines[0].split()[0] == "technique"
        for name, line in zip(TECHNIQUE_NAMES, lines[1:15]):
            assert line.startswith(name)
        assert lines[-1] == "(n = 10; ** p < 0.01, * p < 0.05)"

    def test_format_tsv_parses(self):
        labels = [0, 1] * 5
        rng = np.random.default_rng(2)
        rows = [tuple(rng.uniform(size=5)) for _ in range(10)]
        tsv = correlation_table(_labeled_segments(labels), _scores(rows)).format_tsv()
        body = [line.split("\t") for line in tsv.strip().splitlines()]
        assert body[0] == ["technique", "valence", "joy", "anger", "fear", "sadness"]
        assert len(body) == 15
        assert all(len(row) == 6 for row in body)

    def test_empty_segments_rejected(self):
        with pytest.raises(DegenerateDataError):
            correlation_table([], [])

    def test_unlabeled_segment_rejected(self):
        seg = Segment(key="1:0:1", surface="w", tokens=("w",))
        with pytest.raises(ValueError):
            correlation_table([seg], _scores([(0.1, 0.2, 0.3, 0.4, 0.5)]))
