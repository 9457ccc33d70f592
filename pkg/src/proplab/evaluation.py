"""Per-technique precision/recall/F1 and micro-averaged F1 reports.

Predictions arrive one per gold annotation row. Multi-label spans are
scored per span as a prediction-multiset vs gold-multiset match, credited
greedily so every correct prediction counts regardless of row order.
Micro-F1 pools TP/FP/FN globally; with exactly one prediction per gold row
it equals plain accuracy.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .corpus import TECHNIQUE_NAMES, SpanAnnotation, TechniqueLabel
from .errors import CorpusError, EvaluationError


@dataclass(frozen=True)
class Prediction:
    article_id: int
    span_start: int
    span_end: int
    technique: TechniqueLabel


@dataclass(frozen=True)
class TechniqueScores:
    precision: float
    recall: float
    f1: float
    support: int
    tp: int
    fp: int
    fn: int


@dataclass(frozen=True)
class EvalReport:
    per_technique: dict[TechniqueLabel, TechniqueScores]
    micro_f1: float
    n_gold: int


def load_predictions(path: str | Path) -> list[Prediction]:
    """Parse a predictions TSV (same four-column shape as the gold file)."""
    path = Path(path)
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise EvaluationError(f"cannot read {path}: {exc}") from exc
    predictions = []
    for lineno, line in enumerate(content.splitlines(), start=1):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise EvaluationError(
                f"{path.name}:{lineno}: expected 4 fields, got {len(fields)}"
            )
        try:
            technique = TechniqueLabel.from_name(fields[1])
            predictions.append(
                Prediction(int(fields[0]), int(fields[2]), int(fields[3]), technique)
            )
        except (ValueError, CorpusError) as exc:
            raise EvaluationError(f"{path.name}:{lineno}: {exc}") from None
    return predictions


def save_predictions(predictions: Sequence[Prediction], path: str | Path) -> None:
    lines = [
        f"{p.article_id}\t{p.technique.label}\t{p.span_start}\t{p.span_end}\n"
        for p in predictions
    ]
    Path(path).write_text("".join(lines), encoding="utf-8", newline="\n")


def per_technique_f1(
    predictions: Sequence[Prediction], golds: Sequence[SpanAnnotation]
) -> EvalReport:
    """Tally the confusion counts per technique and pool them for micro-F1."""
    if len(predictions) != len(golds):
        raise EvaluationError(
            f"{len(predictions)} predictions for {len(golds)} gold rows"
        )
    gold_by_span: dict[tuple[int, int, int], Counter] = {}
    for gold in golds:
        span = (gold.article_id, gold.span_start, gold.span_end)
        gold_by_span.setdefault(span, Counter())[gold.technique] += 1
    pred_by_span: dict[tuple[int, int, int], Counter] = {}
    for pred in predictions:
        span = (pred.article_id, pred.span_start, pred.span_end)
        if span not in gold_by_span:
            raise EvaluationError(f"prediction for unknown span {span}")
        pred_by_span.setdefault(span, Counter())[pred.technique] += 1

    tp: Counter = Counter()
    fp: Counter = Counter()
    fn: Counter = Counter()
    support: Counter = Counter()
    for span, gold_counts in gold_by_span.items():
        pred_counts = pred_by_span.get(span, Counter())
        n_gold_rows = sum(gold_counts.values())
        n_pred_rows = sum(pred_counts.values())
        if n_pred_rows != n_gold_rows:
            raise EvaluationError(
                f"span {span}: {n_pred_rows} predictions for {n_gold_rows} gold rows"
            )
        for technique, count in gold_counts.items():
            support[technique] += count
            matched = min(count, pred_counts.get(technique, 0))
            tp[technique] += matched
            fn[technique] += count - matched
        for technique, count in pred_counts.items():
            fp[technique] += count - min(count, gold_counts.get(technique, 0))

    per_technique = {}
    for technique in TechniqueLabel:
        t_tp, t_fp, t_fn = tp[technique], fp[technique], fn[technique]
        precision = t_tp / (t_tp + t_fp) if t_tp + t_fp else 0.0
        recall = t_tp / (t_tp + t_fn) if t_tp + t_fn else 0.0
        f1 = (
            2.0 * precision * recall / (precision + recall)
            if precision + recall
            else 0.0
        )
        per_technique[technique] = TechniqueScores(
            precision=precision, recall=recall, f1=f1,
            support=support[technique], tp=t_tp, fp=t_fp, fn=t_fn,
        )

    total_tp = sum(tp.values())
    total_fp = sum(fp.values())
    total_fn = sum(fn.values())
    denom = total_tp + 0.5 * (total_fp + total_fn)
    micro = total_tp / denom if denom else 0.0
    return EvalReport(per_technique=per_technique, micro_f1=micro, n_gold=len(golds))


def format_report(report: EvalReport, baseline: EvalReport | None = None) -> str:
    """Aligned text table, one row per technique plus the micro-F1 row.

    With ``baseline`` given, renders two F1 columns side by side instead of
    the full precision/recall breakdown.
    """
    name_width = max(len(name) for name in TECHNIQUE_NAMES) + 2
    lines = []
    if baseline is None:
        header = (
            "technique".ljust(name_width)
            + "precision".rjust(11) + "recall".rjust(9)
            + "F1".rjust(8) + "support".rjust(9)
        )
        lines.append(header)
        for technique in TechniqueLabel:
            scores = report.per_technique[technique]
            lines.append(
                technique.label.ljust(name_width)
                + f"{scores.precision:.3f}".rjust(11)
                + f"{scores.recall:.3f}".rjust(9)
                + f"{scores.f1:.3f}".rjust(8)
                + str(scores.support).rjust(9)
            )
        lines.append(
            "micro-averaged F1".ljust(name_width)
            + "".rjust(11) + "".rjust(9)
            + f"{report.micro_f1:.3f}".rjust(8)
            + str(report.n_gold).rjust(9)
        )
    else:
        lines.append(
            "technique".ljust(name_width) + "baseline".rjust(10) + "model".rjust(10)
        )
        for technique in TechniqueLabel:
            lines.append(
                technique.label.ljust(name_width)
                + f"{baseline.per_technique[technique].f1:.3f}".rjust(10)
                + f"{report.per_technique[technique].f1:.3f}".rjust(10)
            )
        lines.append(
            "micro-averaged F1".ljust(name_width)
            + f"{baseline.micro_f1:.3f}".rjust(10)
            + f"{report.micro_f1:.3f}".rjust(10)
        )
    return "\n".join(lines)


def report_tsv(report: EvalReport) -> str:
    lines = ["technique\tprecision\trecall\tf1\tsupport"]
    for technique in TechniqueLabel:
        scores = report.per_technique[technique]
        lines.append(
            f"{technique.label}\t{scores.precision:.6f}\t{scores.recall:.6f}"
            f"\t{scores.f1:.6f}\t{scores.support}"
        )
    lines.append(f"micro-averaged F1\t\t\t{report.micro_f1:.6f}\t{report.n_gold}")
    return "\n".join(lines) + "\n"
