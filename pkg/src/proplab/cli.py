"""Command-line entry point wiring corpus → features → analysis/training.

Subcommands: ``validate``, ``analyze``, ``featurize``, ``train``,
``predict``, ``evaluate``, ``ablate``. Options come from an INI-style
config file (``--config``) with CLI flags overriding; ``PROPLAB_SEED`` is
the seed fallback. Exit codes: 0 success, 1 usage, 2 data error.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from collections import Counter
from dataclasses import dataclass, field, fields as dataclass_fields
from pathlib import Path

import numpy as np

from .categories import CategoryLexicon, load_dictionary
from .checkpoint import load_checkpoint, save_checkpoint
from .corpus import (
    TECHNIQUE_NAMES,
    TechniqueLabel,
    extract_segments,
    load_annotations,
    load_corpus,
    parse_segment_key,
)
from .embeddings import (
    HashEmbeddingProvider,
    StoreEmbeddingProvider,
    load_embeddings,
)
from .emotion import (
    EmotionLexicon,
    LexiconEmotionProvider,
    PrecomputedEmotionProvider,
    load_precomputed,
)
from .errors import ModelError, ProplabError
from .evaluation import (
    Prediction,
    format_report,
    load_predictions,
    per_technique_f1,
    report_tsv,
    save_predictions,
)
from .features import CONDITIONS, build_bundles, load_bundles, save_bundles
from .fusion import ModelConfig, predict_batch, train
from .stats import correlation_table

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

SEED_ENV_VAR = "PROPLAB_SEED"

# ModelConfig fields a config file may override; the data-dependent widths
# and the class count are always derived from the feature schema.
_DERIVED_MODEL_FIELDS = {"d_embed", "d_aux", "n_classes", "seed"}


class UsageError(Exception):
    """Bad flags/config; maps to exit code 1."""


@dataclass
class RunConfig:
    """Merged file + flag settings for one command invocation."""

    articles: Path | None = None
    labels: Path | None = None
    emotion_lexicon: Path | None = None
    emotion_scores: Path | None = None
    embeddings: Path | None = None
    dictionary: Path | None = None
    checkpoint: Path | None = None
    features: Path | None = None
    predictions: Path | None = None
    baseline: Path | None = None
    out: Path | None = None
    condition: str = "embed+emotion"
    conditions: str | None = None
    seed: int = 0
    context_window: int = 3
    model_overrides: dict[str, int | float] = field(default_factory=dict)


_PATH_KEYS = (
    "articles",
    "labels",
    "emotion_lexicon",
    "emotion_scores",
    "embeddings",
    "dictionary",
    "checkpoint",
    "features",
    "predictions",
    "baseline",
    "out",
)


_INT_MODEL_FIELDS = {
    "d_embed", "d_aux", "d_h", "d_hidden", "n_classes",
    "batch_size", "max_epochs", "patience", "seed",
}


def _model_field_types() -> dict[str, type]:
    return {
        f.name: (int if f.name in _INT_MODEL_FIELDS else float)
        for f in dataclass_fields(ModelConfig)
    }


def _apply_config_file(run: RunConfig, path: Path) -> int | None:
    """Fill ``run`` from an INI file; paths resolve relative to the file.

    Returns the file's seed (if any) so flag/env precedence can be applied
    by the caller.
    """
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise UsageError(f"malformed config {path}: {exc}") from exc

    base = path.parent
    for key in parser.options("paths") if parser.has_section("paths") else []:
        if key not in _PATH_KEYS:
            raise UsageError(f"unknown [paths] key {key!r} in {path.name}")
        setattr(run, key, base / parser.get("paths", key))

    file_seed: int | None = None
    if parser.has_section("run"):
        for key in parser.options("run"):
            value = parser.get("run", key)
            try:
                if key == "condition":
                    run.condition = value
                elif key == "conditions":
                    run.conditions = value
                elif key == "seed":
                    file_seed = int(value)
                elif key == "context_window":
                    run.context_window = int(value)
                else:
                    raise UsageError(f"unknown [run] key {key!r} in {path.name}")
            except ValueError:
                raise UsageError(f"non-integer [run] {key} in {path.name}") from None

    if parser.has_section("model"):
        types = _model_field_types()
        for key in parser.options("model"):
            if key in _DERIVED_MODEL_FIELDS:
                raise UsageError(
                    f"[model] {key} is derived from the feature schema, not configurable"
                )
            if key not in types:
                raise UsageError(f"unknown [model] key {key!r} in {path.name}")
            value = parser.get("model", key)
            try:
                run.model_overrides[key] = types[key](value)
            except ValueError:
                raise UsageError(f"bad [model] {key} value {value!r}") from None
    return file_seed


def merge_run_config(args: argparse.Namespace) -> RunConfig:
    """defaults ← config file ← CLI flags; seed also falls back to the env."""
    run = RunConfig()
    file_seed = None
    if args.config is not None:
        file_seed = _apply_config_file(run, args.config)

    for key in _PATH_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            setattr(run, key, value)
    if getattr(args, "condition", None) is not None:
        run.condition = args.condition
    if getattr(args, "conditions", None) is not None:
        run.conditions = args.conditions

    if args.seed is not None:
        run.seed = args.seed
    elif file_seed is not None:
        run.seed = file_seed
    elif os.environ.get(SEED_ENV_VAR):
        try:
            run.seed = int(os.environ[SEED_ENV_VAR])
        except ValueError:
            raise UsageError(
                f"{SEED_ENV_VAR} must be an integer, got "
                f"{os.environ[SEED_ENV_VAR]!r}"
            ) from None

    if run.condition not in CONDITIONS:
        raise UsageError(
            f"unknown condition {run.condition!r}; expected one of "
            f"{', '.join(sorted(CONDITIONS))}"
        )
    return run


def _require(value: Path | None, flag: str) -> Path:
    if value is None:
        raise UsageError(f"missing required option {flag}")
    return value


def _load_segments(run: RunConfig):
    articles = load_corpus(_require(run.articles, "--articles"))
    annotations = load_annotations(_require(run.labels, "--labels"))
    return articles, annotations, extract_segments(
        articles, annotations, context_window=run.context_window
    )


def _emotion_provider(run: RunConfig):
    if run.emotion_scores is not None:
        fallback = None
        if run.emotion_lexicon is not None:
            fallback = LexiconEmotionProvider(EmotionLexicon.load(run.emotion_lexicon))
        return PrecomputedEmotionProvider(load_precomputed(run.emotion_scores), fallback)
    if run.emotion_lexicon is not None:
        return LexiconEmotionProvider(EmotionLexicon.load(run.emotion_lexicon))
    raise UsageError("need --emotion-scores or --emotion-lexicon")


def _embed_provider(run: RunConfig):
    if run.embeddings is not None:
        return StoreEmbeddingProvider(load_embeddings(run.embeddings))
    return HashEmbeddingProvider()


def _category_lexicon(run: RunConfig) -> CategoryLexicon:
    return load_dictionary(_require(run.dictionary, "--dictionary"))


def cmd_validate(run: RunConfig) -> int:
    """Check offsets and duplicates; print the label histogram."""
    articles = load_corpus(_require(run.articles, "--articles"))
    annotations = load_annotations(_require(run.labels, "--labels"))
    by_id = {a.id: a for a in articles}
    violations: list[str] = []
    seen: dict[tuple[int, TechniqueLabel, int, int], int] = {}
    for row, ann in enumerate(annotations, start=1):
        article = by_id.get(ann.article_id)
        if article is None:
            violations.append(f"row {row}: unknown article {ann.article_id}")
        elif ann.span_end > len(article.text):
            violations.append(
                f"row {row}: span [{ann.span_start}, {ann.span_end}) past end "
                f"of article {ann.article_id} (length {len(article.text)})"
            )
        key = (ann.article_id, ann.technique, ann.span_start, ann.span_end)
        if key in seen:
            violations.append(f"row {row}: duplicate of row {seen[key]}")
        else:
            seen[key] = row
    for violation in violations:
        print(violation, file=sys.stderr)

    counts = Counter(ann.technique for ann in annotations)
    total = len(annotations)
    width = max(len(name) for name in TECHNIQUE_NAMES) + 2
    print(f"{len(articles)} articles, {total} annotation rows")
    for technique in TechniqueLabel:
        count = counts[technique]
        pct = 100.0 * count / total if total else 0.0
        print(technique.label.ljust(width) + str(count).rjust(6) + f"{pct:7.1f}%")
    return EXIT_DATA if violations else EXIT_OK


def cmd_analyze(run: RunConfig) -> int:
    """Print the 14×5 technique-emotion Kendall-τ table."""
    _articles, _annotations, segments = _load_segments(run)
    provider = _emotion_provider(run)
    scores = [provider.get_scores(segment) for segment in segments]
    table = correlation_table(segments, scores)
    print(table.format_text())
    if run.out is not None:
        run.out.write_text(table.format_tsv(), encoding="utf-8", newline="\n")
    return EXIT_OK


def _build_condition_bundles(run: RunConfig, segments, condition: str):
    spec = CONDITIONS[condition]
    embed_provider = _embed_provider(run) if spec.use_embed else None
    emotion_provider = _emotion_provider(run) if spec.use_emotion else None
    category_lexicon = _category_lexicon(run) if spec.use_category else None
    return build_bundles(
        segments,
        condition,
        embed_provider=embed_provider,
        emotion_provider=emotion_provider,
        category_lexicon=category_lexicon,
    )


def cmd_featurize(run: RunConfig) -> int:
    """Compute feature bundles for the condition and cache them to --out."""
    out = _require(run.out, "--out")
    _articles, _annotations, segments = _load_segments(run)
    bundles, schema = _build_condition_bundles(run, segments, run.condition)
    save_bundles(bundles, schema, [segment.gold for segment in segments], out)
    print(f"wrote {len(bundles)} feature rows ({schema.condition}) to {out}")
    return EXIT_OK


def _model_config(schema, seed: int, overrides: dict[str, int | float]) -> ModelConfig:
    return ModelConfig(
        d_embed=schema.embed_dim,
        d_aux=schema.aux_dim,
        n_classes=len(TECHNIQUE_NAMES),
        seed=seed,
        **overrides,
    )


def cmd_train(run: RunConfig) -> int:
    """Train the condition recorded in the feature cache; write a checkpoint."""
    checkpoint_path = _require(run.checkpoint, "--checkpoint")
    bundles, golds, schema = load_bundles(_require(run.features, "--features"))
    if any(gold is None for gold in golds):
        raise ModelError("feature cache contains unlabeled rows; cannot train")
    cfg = _model_config(schema, run.seed, run.model_overrides)
    arch = CONDITIONS[schema.condition].arch
    result = train(list(zip(bundles, golds)), cfg, arch=arch)
    save_checkpoint(result.params, cfg, schema, checkpoint_path)
    if run.out is not None:
        run.out.write_text(result.log_tsv(), encoding="utf-8", newline="\n")
    print(
        f"{schema.condition}: best validation micro-F1 {result.best_val_f1:.4f} "
        f"at epoch {result.best_epoch} ({len(result.log)} epochs run)"
    )
    return EXIT_OK


def _stack_bundles(bundles, schema) -> tuple[np.ndarray, np.ndarray]:
    n = len(bundles)
    x_embed = np.zeros((n, schema.embed_dim), dtype=np.float64)
    x_aux = np.zeros((n, schema.aux_dim), dtype=np.float64)
    for i, bundle in enumerate(bundles):
        x_embed[i] = bundle.embedding
        x_aux[i] = bundle.aux
    return x_embed, x_aux


def cmd_predict(run: RunConfig) -> int:
    """Label every cached segment with the checkpointed model."""
    out = _require(run.out, "--out")
    bundles, _golds, cache_schema = load_bundles(_require(run.features, "--features"))
    params, cfg, ckpt_schema = load_checkpoint(_require(run.checkpoint, "--checkpoint"))
    ckpt_schema.check_compatible(cache_schema)
    x_embed, x_aux = _stack_bundles(bundles, cache_schema)
    indices, _probs = predict_batch(x_embed, x_aux, params, cfg)
    predictions = []
    for bundle, index in zip(bundles, indices):
        article_id, start, end = parse_segment_key(bundle.key)
        predictions.append(Prediction(article_id, start, end, TechniqueLabel(int(index))))
    save_predictions(predictions, out)
    print(f"wrote {len(predictions)} predictions to {out}")
    return EXIT_OK


def cmd_evaluate(run: RunConfig) -> int:
    """Score predictions against gold; print the per-technique report."""
    golds = load_annotations(_require(run.labels, "--labels"))
    predictions = load_predictions(_require(run.predictions, "--predictions"))
    report = per_technique_f1(predictions, golds)
    baseline_report = None
    if run.baseline is not None:
        baseline_report = per_technique_f1(load_predictions(run.baseline), golds)
    print(format_report(report, baseline_report))
    if run.out is not None:
        run.out.write_text(report_tsv(report), encoding="utf-8", newline="\n")
    return EXIT_OK


def cmd_ablate(run: RunConfig) -> int:
    """Train several conditions on the same data; print a summary table."""
    names = [
        name.strip()
        for name in (run.conditions or "logistic-baseline,embed+emotion").split(",")
        if name.strip()
    ]
    for name in names:
        if name not in CONDITIONS:
            raise UsageError(f"unknown condition {name!r}")
    _articles, _annotations, segments = _load_segments(run)
    rows: list[tuple[str, float]] = []
    for name in names:
        bundles, schema = _build_condition_bundles(run, segments, name)
        cfg = _model_config(schema, run.seed, run.model_overrides)
        golds = [segment.gold for segment in segments]
        if any(gold is None for gold in golds):
            raise ModelError("all segments need gold labels for ablation")
        result = train(list(zip(bundles, golds)), cfg, arch=CONDITIONS[name].arch)
        rows.append((name, result.best_val_f1))

    width = max(len(name) for name in CONDITIONS) + 2
    print("condition".ljust(width) + "val micro-F1".rjust(14))
    for name, f1 in rows:
        print(name.ljust(width) + f"{f1:.4f}".rjust(14))
    if run.out is not None:
        tsv = "condition\tval_micro_f1\n" + "".join(
            f"{name}\t{f1:.6f}\n" for name, f1 in rows
        )
        run.out.write_text(tsv, encoding="utf-8", newline="\n")
    return EXIT_OK


_COMMANDS = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "featurize": cmd_featurize,
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "ablate": cmd_ablate,
}


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this toolkit reserves 2 for data."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="proplab",
        description="Propaganda-technique span classification toolkit.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, func in _COMMANDS.items():
        sub = subparsers.add_parser(name, help=func.__doc__)
        sub.set_defaults(func=func)
        sub.add_argument("--config", type=Path, metavar="FILE")
        sub.add_argument("--seed", type=int)
        sub.add_argument("--articles", type=Path, metavar="DIR")
        sub.add_argument("--labels", type=Path, metavar="TSV")
        sub.add_argument("--condition", choices=sorted(CONDITIONS))
        sub.add_argument("--conditions", metavar="LIST",
                         help="comma-separated condition names (ablate)")
        sub.add_argument("--emotion-lexicon", type=Path, metavar="TSV")
        sub.add_argument("--emotion-scores", type=Path, metavar="TSV")
        sub.add_argument("--embeddings", type=Path, metavar="FILE")
        sub.add_argument("--dictionary", type=Path, metavar="FILE")
        sub.add_argument("--checkpoint", type=Path, metavar="FILE")
        sub.add_argument("--features", type=Path, metavar="FILE",
                         help="feature cache written by featurize")
        sub.add_argument("--predictions", type=Path, metavar="TSV")
        sub.add_argument("--baseline", type=Path, metavar="TSV",
                         help="second predictions file for side-by-side F1")
        sub.add_argument("--out", type=Path, metavar="FILE")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        run = merge_run_config(args)
        return args.func(run)
    except UsageError as exc:
        print(f"proplab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ProplabError, OSError) as exc:
        print(f"proplab: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
