"""Versioned plain-text checkpoints for trained classifiers.

The file records the model config, class-name order, the feature schema
the model was trained on, and every weight matrix with 17 significant
digits, which round-trips float64 exactly: a loaded checkpoint predicts
bit-identically to the one that was saved.
"""

from __future__ import annotations

from dataclasses import fields as dataclass_fields
from pathlib import Path

import numpy as np

from .corpus import TECHNIQUE_NAMES
from .errors import CheckpointError
from .features import FeatureSchema
from .fusion import ModelConfig, Parameters

_MAGIC = "proplab-checkpoint"
_VERSION = 1

_INT_FIELDS = {
    "d_embed", "d_aux", "d_h", "d_hidden", "n_classes", "batch_size",
    "max_epochs", "patience", "seed",
}


def save_checkpoint(
    params: Parameters,
    cfg: ModelConfig,
    schema: FeatureSchema,
    path: str | Path,
) -> None:
    lines = [f"{_MAGIC} {_VERSION}\n", f"arch {params.arch}\n", "[config]\n"]
    for f in dataclass_fields(ModelConfig):
        value = getattr(cfg, f.name)
        if isinstance(value, float):
            value = format(value, ".17g")
        lines.append(f"{f.name}={value}\n")
    lines.append("[classes]\n")
    for name in TECHNIQUE_NAMES[: cfg.n_classes]:
        lines.append(name + "\n")
    lines.append("[schema]\n")
    lines.append(f"condition={schema.condition}\n")
    lines.append(f"embed_provider={schema.embed_provider}\n")
    lines.append(f"embed_dim={schema.embed_dim}\n")
    lines.append(f"emotion_provider={schema.emotion_provider}\n")
    lines.append(f"category_count={schema.category_count}\n")
    lines.append(f"use_context={'true' if schema.use_context else 'false'}\n")
    lines.append("[weights]\n")
    for name, weight in params.named_weights():
        matrix = np.atleast_2d(weight)
        lines.append(f"{name} {matrix.shape[0]} {matrix.shape[1]}\n")
        for row in matrix:
            lines.append(" ".join(format(v, ".17g") for v in row) + "\n")
    lines.append("[end]\n")
    Path(path).write_text("".join(lines), encoding="utf-8", newline="\n")


def load_checkpoint(path: str | Path) -> tuple[Parameters, ModelConfig, FeatureSchema]:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CheckpointError(f"cannot read {path}: {exc}") from exc

    cursor = _Cursor(lines, path.name)
    magic = cursor.take().split(" ")
    if len(magic) != 2 or magic[0] != _MAGIC:
        raise CheckpointError(f"{path.name}: not a checkpoint file")
    if magic[1] != str(_VERSION):
        raise CheckpointError(
            f"{path.name}: unsupported checkpoint version {magic[1]} "
            f"(expected {_VERSION})"
        )
    arch_line = cursor.take().split(" ")
    if len(arch_line) != 2 or arch_line[0] != "arch":
        raise CheckpointError(f"{path.name}: missing arch line")
    arch = arch_line[1]

    cursor.expect("[config]")
    raw_cfg: dict[str, str] = {}
    while not cursor.peek().startswith("["):
        key, _, value = cursor.take().partition("=")
        raw_cfg[key] = value
    try:
        cfg = ModelConfig(
            **{
                key: (int(v) if key in _INT_FIELDS else float(v))
                for key, v in raw_cfg.items()
            }
        )
    except (TypeError, ValueError) as exc:
        raise CheckpointError(f"{path.name}: bad config section ({exc})") from None

    cursor.expect("[classes]")
    class_names = []
    while not cursor.peek().startswith("["):
        class_names.append(cursor.take())
    if tuple(class_names) != TECHNIQUE_NAMES[: cfg.n_classes]:
        raise CheckpointError(f"{path.name}: class-name order does not match")

    cursor.expect("[schema]")
    raw_schema: dict[str, str] = {}
    while not cursor.peek().startswith("["):
        key, _, value = cursor.take().partition("=")
        raw_schema[key] = value
    try:
        schema = FeatureSchema(
            condition=raw_schema["condition"],
            embed_provider=raw_schema["embed_provider"],
            embed_dim=int(raw_schema["embed_dim"]),
            emotion_provider=raw_schema["emotion_provider"],
            category_count=int(raw_schema["category_count"]),
            use_context=raw_schema["use_context"] == "true",
        )
    except (KeyError, ValueError) as exc:
        raise CheckpointError(f"{path.name}: bad schema section ({exc})") from None

    cursor.expect("[weights]")
    weights: dict[str, np.ndarray] = {}
    while cursor.peek() != "[end]":
        header = cursor.take().split(" ")
        if len(header) != 3:
            raise CheckpointError(f"{path.name}: malformed weight header {header!r}")
        name, n_rows, n_cols = header[0], int(header[1]), int(header[2])
        rows = []
        for _ in range(n_rows):
            values = cursor.take().split(" ")
            if len(values) != n_cols:
                raise CheckpointError(f"{path.name}: ragged weight rows for {name}")
            rows.append([float(v) for v in values])
        weights[name] = np.array(rows, dtype=np.float64)
    cursor.expect("[end]")

    params = _assemble(arch, weights, cfg, path.name)
    return params, cfg, schema


class _Cursor:
    def __init__(self, lines: list[str], filename: str):
        self._lines = lines
        self._pos = 0
        self._filename = filename

    def peek(self) -> str:
        if self._pos >= len(self._lines):
            raise CheckpointError(f"{self._filename}: truncated checkpoint")
        return self._lines[self._pos]

    def take(self) -> str:
        line = self.peek()
        self._pos += 1
        return line

    def expect(self, header: str) -> None:
        line = self.take()
        if line != header:
            raise CheckpointError(
                f"{self._filename}: expected {header!r}, found {line!r}"
            )


def _expected_shapes(arch: str, cfg: ModelConfig) -> dict[str, tuple[int, int]]:
    if arch == "logistic":
        return {
            "W3": (cfg.n_classes, cfg.d_embed + cfg.d_aux),
            "b3": (1, cfg.n_classes),
        }
    shapes = {
        "W2": (cfg.d_hidden, cfg.d_concat),
        "b2": (1, cfg.d_hidden),
        "W3": (cfg.n_classes, cfg.d_hidden),
        "b3": (1, cfg.n_classes),
    }
    if cfg.d_aux > 0:
        shapes["W1"] = (cfg.d_h, cfg.d_aux)
        shapes["b1"] = (1, cfg.d_h)
    return shapes


def _assemble(
    arch: str, weights: dict[str, np.ndarray], cfg: ModelConfig, filename: str
) -> Parameters:
    expected = _expected_shapes(arch, cfg)
    if set(weights) != set(expected):
        raise CheckpointError(
            f"{filename}: weight set {sorted(weights)} does not match "
            f"architecture {arch!r}"
        )
    for name, shape in expected.items():
        if weights[name].shape != shape:
            raise CheckpointError(
                f"{filename}: {name} has shape {weights[name].shape}, "
                f"expected {shape}"
            )

    def vec(name: str) -> np.ndarray | None:
        return weights[name][0] if name in weights else None

    return Parameters(
        arch=arch,
        W1=weights.get("W1"),
        b1=vec("b1"),
        W2=weights.get("W2"),
        b2=vec("b2"),
        W3=weights["W3"],
        b3=weights["b3"][0],
    )
