"""Kendall tau-b association between technique labels and emotion scores.

The technique side is a binary presence indicator, so the tie-adjusted
tau-b variant is used throughout. Significance comes from the two-sided
normal approximation with the standard tie-corrected variance of the
concordance statistic; an exhaustive/permutation p-value is available as a
self-check for small samples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import TECHNIQUE_NAMES, Segment, TechniqueLabel
from .emotion import EMOTION_DIMENSIONS, EmotionScores
from .errors import DegenerateDataError


@dataclass(frozen=True)
class CorrelationResult:
    tau: float
    p_value: float
    n: int

    @property
    def stars(self) -> str:
        if self.p_value < 0.01:
            return "**"
        if self.p_value < 0.05:
            return "*"
        return ""


def _tie_term(values: np.ndarray, weight) -> float:
    _, counts = np.unique(values, return_counts=True)
    return float(sum(weight(int(t)) for t in counts if t > 1))


def kendall_tau_b(
    x: Sequence[float],
    y: Sequence[float],
    p_method: str = "normal",
    permutation_rounds: int = 20000,
    seed: int = 0,
) -> CorrelationResult:
    """Tie-adjusted Kendall correlation between two equal-length samples.

    ``p_method`` is ``"normal"`` (tie-corrected normal approximation of the
    concordance statistic, two-sided) or ``"permutation"`` (exhaustive over
    all arrangements for n <= 8, seeded Monte Carlo up to n = 30).
    Constant input is an error rather than tau = 0.
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.ndim != 1 or ya.ndim != 1 or xa.shape != ya.shape:
        raise ValueError("x and y must be equal-length 1-d sequences")
    n = xa.shape[0]
    if n < 2:
        raise DegenerateDataError("need at least two observations")
    if np.unique(xa).size < 2 or np.unique(ya).size < 2:
        raise DegenerateDataError("constant input; tau undefined")

    s, denom = _concordance(xa, ya)
    tau = s / denom

    if p_method == "normal":
        p = _normal_p(xa, ya, n, s)
    elif p_method == "permutation":
        p = _permutation_p(xa, ya, s, permutation_rounds, seed)
    else:
        raise ValueError(f"unknown p_method: {p_method!r}")
    return CorrelationResult(tau=tau, p_value=p, n=n)


def _concordance(xa: np.ndarray, ya: np.ndarray) -> tuple[float, float]:
    """Concordant-minus-discordant count and the tau-b denominator."""
    n = xa.shape[0]
    iu = np.triu_indices(n, k=1)
    dx = np.sign(xa[:, None] - xa[None, :])[iu]
    dy = np.sign(ya[:, None] - ya[None, :])[iu]
    prod = dx * dy
    s = float(np.count_nonzero(prod > 0) - np.count_nonzero(prod < 0))
    n0 = n * (n - 1) / 2.0
    tx = _tie_term(xa, lambda t: t * (t - 1) / 2.0)
    ty = _tie_term(ya, lambda t: t * (t - 1) / 2.0)
    denom = math.sqrt((n0 - tx) * (n0 - ty))
    if denom == 0.0:
        raise DegenerateDataError("all pairs tied; tau undefined")
    return s, denom


def _normal_p(xa: np.ndarray, ya: np.ndarray, n: int, s: float) -> float:
    v0 = n * (n - 1) * (2 * n + 5)
    vt = _tie_term(xa, lambda t: t * (t - 1) * (2 * t + 5))
    vu = _tie_term(ya, lambda t: t * (t - 1) * (2 * t + 5))
    tx1 = _tie_term(xa, lambda t: t * (t - 1))
    ty1 = _tie_term(ya, lambda t: t * (t - 1))
    tx2 = _tie_term(xa, lambda t: t * (t - 1) * (t - 2))
    ty2 = _tie_term(ya, lambda t: t * (t - 1) * (t - 2))
    var = (v0 - vt - vu) / 18.0 + (tx1 * ty1) / (2.0 * n * (n - 1))
    if n > 2:
        var += (tx2 * ty2) / (9.0 * n * (n - 1) * (n - 2))
    if var <= 0.0:
        raise DegenerateDataError("zero variance; significance undefined")
    z = s / math.sqrt(var)
    return math.erfc(abs(z) / math.sqrt(2.0))


def _permutation_p(
    xa: np.ndarray, ya: np.ndarray, s_observed: float, rounds: int, seed: int
) -> float:
    # Permuting y leaves its tie structure (hence the tau-b denominator)
    # unchanged, so |s| ordering equals |tau| ordering.
    n = xa.shape[0]
    if n > 30:
        raise ValueError("permutation p-value supported for n <= 30 only")
    abs_obs = abs(s_observed) - 1e-9
    if n <= 8:
        hits = total = 0
        for perm in itertools.permutations(range(n)):
            s_perm, _ = _concordance(xa, ya[list(perm)])
            total += 1
            if abs(s_perm) >= abs_obs:
                hits += 1
        return hits / total
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(rounds):
        s_perm, _ = _concordance(xa, rng.permutation(ya))
        if abs(s_perm) >= abs_obs:
            hits += 1
    return (hits + 1) / (rounds + 1)


class CorrelationTable:
    """Complete 14-technique x 5-dimension grid of correlation cells.

    Degenerate cells (technique absent or ubiquitous, or constant scores)
    hold ``None`` and render as ``n/a``.
    """

    def __init__(self, cells: dict[tuple[int, int], CorrelationResult | None], n: int):
        self.cells = cells
        self.n = n

    def get(self, technique: TechniqueLabel, dimension: str) -> CorrelationResult | None:
        return self.cells[(int(technique), EMOTION_DIMENSIONS.index(dimension))]

    def format_text(self) -> str:
        name_width = max(len(name) for name in TECHNIQUE_NAMES) + 2
        col_width = 12
        header = "technique".ljust(name_width) + "".join(
            dim.rjust(col_width) for dim in EMOTION_DIMENSIONS
        )
        lines = [header]
        for t_index, name in enumerate(TECHNIQUE_NAMES):
            row = name.ljust(name_width)
            for d_index in range(len(EMOTION_DIMENSIONS)):
                row += _format_cell(self.cells[(t_index, d_index)]).rjust(col_width)
            lines.append(row)
        lines.append(f"(n = {self.n}; ** p < 0.01, * p < 0.05)")
        return "\n".join(lines)

    def format_tsv(self) -> str:
        lines = ["technique\t" + "\t".join(EMOTION_DIMENSIONS)]
        for t_index, name in enumerate(TECHNIQUE_NAMES):
            cells = [
                _format_cell(self.cells[(t_index, d_index)])
                for d_index in range(len(EMOTION_DIMENSIONS))
            ]
            lines.append(name + "\t" + "\t".join(cells))
        return "\n".join(lines) + "\n"


def _format_cell(cell: CorrelationResult | None) -> str:
    if cell is None:
        return "n/a"
    return f"{cell.tau:.3f}{cell.stars}"


def correlation_table(
    segments: Sequence[Segment], scores: Sequence[EmotionScores]
) -> CorrelationTable:
    """Correlate each technique's presence indicator with each emotion
    dimension over labeled segments."""
    if len(segments) == 0:
        raise DegenerateDataError("no segments to analyze")
    if len(segments) != len(scores):
        raise ValueError("segments and scores must align one-to-one")
    if any(seg.gold is None for seg in segments):
        raise ValueError("all segments must carry a gold label")

    score_matrix = np.array([s.as_tuple() for s in scores], dtype=np.float64)
    cells: dict[tuple[int, int], CorrelationResult | None] = {}
    for t_index in range(len(TECHNIQUE_NAMES)):
        indicator = np.array(
            [1.0 if int(seg.gold) == t_index else 0.0 for seg in segments]
        )
        for d_index in range(len(EMOTION_DIMENSIONS)):
            try:
                cells[(t_index, d_index)] = kendall_tau_b(
                    indicator, score_matrix[:, d_index]
                )
            except DegenerateDataError:
                cells[(t_index, d_index)] = None
    return CorrelationTable(cells, n=len(segments))
