"""Feedforward fusion classifier over embedding + auxiliary feature blocks.

Auxiliary features (emotion, optionally word categories) are projected to a
50-d space with a ReLU dense layer, concatenated with the sentence
embedding, passed through a 256-d ReLU layer with inverted dropout, and
classified by a softmax output layer. Training minimizes mean categorical
cross-entropy with Adam. A single softmax layer over the raw concatenated
features serves as the logistic-regression baseline; it shares the split,
optimizer and early-stopping machinery.

All algebra is float64 numpy. Parameter initialization draws from the
pinned xorshift* stream (:mod:`proplab.rng`); batch shuffling, the
validation split and dropout masks draw from a seeded numpy generator.
Given identical config and seed, training is bit-reproducible.
"""

from __future__ import annotations

import copy
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .corpus import TechniqueLabel
from .errors import ModelError
from .features import FeatureBundle
from .rng import XorShift64Star

logger = logging.getLogger(__name__)

ARCH_FUSION = "fusion"
ARCH_LOGISTIC = "logistic"

LOG_CLAMP = 1e-12


@dataclass
class ModelConfig:
    d_embed: int = 1024
    d_aux: int = 5
    d_h: int = 50
    d_hidden: int = 256
    n_classes: int = 14
    dropout_rate: float = 0.5
    learning_rate: float = 1e-4
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    batch_size: int = 32
    max_epochs: int = 100
    patience: int = 10
    seed: int = 7
    validation_fraction: float = 0.10

    def __post_init__(self) -> None:
        # d_embed / d_aux may be zero for the single-block conditions, but
        # the network must see at least one feature block.
        if self.d_embed < 0 or self.d_aux < 0 or self.d_embed + self.d_aux < 1:
            raise ModelError("need a nonempty feature input")
        if min(self.d_h, self.d_hidden, self.n_classes, self.batch_size) < 1:
            raise ModelError("dimensions and batch size must be >= 1")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ModelError("dropout_rate must be in [0, 1)")
        if not 0.0 < self.validation_fraction < 1.0:
            raise ModelError("validation_fraction must be in (0, 1)")
        if self.max_epochs < 0 or self.patience < 1:
            raise ModelError("max_epochs must be >= 0 and patience >= 1")

    @property
    def d_concat(self) -> int:
        """Width of the fused vector feeding the 256-d layer."""
        return self.d_embed + (self.d_h if self.d_aux > 0 else 0)


@dataclass
class Parameters:
    """Weights, Adam moment accumulators and the step counter.

    The logistic baseline populates only the output layer; the projection
    and hidden layers are ``None`` there.
    """

    arch: str
    W1: np.ndarray | None
    b1: np.ndarray | None
    W2: np.ndarray | None
    b2: np.ndarray | None
    W3: np.ndarray
    b3: np.ndarray
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)
    step: int = 0

    def named_weights(self) -> list[tuple[str, np.ndarray]]:
        names = ("W1", "b1", "W2", "b2", "W3", "b3")
        return [(n, getattr(self, n)) for n in names if getattr(self, n) is not None]


@dataclass
class Gradients:
    W1: np.ndarray | None = None
    b1: np.ndarray | None = None
    W2: np.ndarray | None = None
    b2: np.ndarray | None = None
    W3: np.ndarray | None = None
    b3: np.ndarray | None = None

    def get(self, name: str) -> np.ndarray | None:
        return getattr(self, name)


@dataclass
class ForwardTrace:
    """Intermediate activations kept for backpropagation."""

    x_embed: np.ndarray
    x_aux: np.ndarray
    h: np.ndarray | None  # projected aux block, post-ReLU
    z: np.ndarray  # fused input to the hidden layer (or to W3 for logistic)
    hidden: np.ndarray | None  # 256-d layer post-ReLU, pre-dropout
    o: np.ndarray  # what the output layer consumed
    probs: np.ndarray
    dropout_mask: np.ndarray | None


class LossValue(NamedTuple):
    total: float
    mean: float


def _glorot_fill(shape: tuple[int, int], stream: XorShift64Star) -> np.ndarray:
    fan_out, fan_in = shape
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    flat = [stream.next_uniform(-limit, limit) for _ in range(fan_in * fan_out)]
    return np.array(flat, dtype=np.float64).reshape(shape)


def init_parameters(cfg: ModelConfig, arch: str = ARCH_FUSION) -> Parameters:
    """Glorot-uniform weights from the seeded xorshift* stream, zero biases.

    Layers are filled row-major in a fixed order (projection, hidden,
    output), so a given seed always yields the same parameters.
    """
    stream = XorShift64Star(cfg.seed)
    if arch == ARCH_FUSION:
        W1 = b1 = None
        if cfg.d_aux > 0:
            W1 = _glorot_fill((cfg.d_h, cfg.d_aux), stream)
            b1 = np.zeros(cfg.d_h)
        W2 = _glorot_fill((cfg.d_hidden, cfg.d_concat), stream)
        b2 = np.zeros(cfg.d_hidden)
        W3 = _glorot_fill((cfg.n_classes, cfg.d_hidden), stream)
        b3 = np.zeros(cfg.n_classes)
        return Parameters(arch=arch, W1=W1, b1=b1, W2=W2, b2=b2, W3=W3, b3=b3)
    if arch == ARCH_LOGISTIC:
        W3 = _glorot_fill((cfg.n_classes, cfg.d_embed + cfg.d_aux), stream)
        b3 = np.zeros(cfg.n_classes)
        return Parameters(arch=arch, W1=None, b1=None, W2=None, b2=None, W3=W3, b3=b3)
    raise ModelError(f"unknown architecture: {arch!r}")


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def _as_batch(x: np.ndarray, width: int, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != width:
        raise ModelError(f"{name} has shape {x.shape}, expected (N, {width})")
    return x


def forward(
    x_embed: np.ndarray,
    x_aux: np.ndarray,
    params: Parameters,
    cfg: ModelConfig,
    train_mode: bool = False,
    rng: np.random.Generator | None = None,
) -> ForwardTrace:
    """Run the network; in train mode inverted dropout rescales by the keep
    probability so evaluation needs no scaling."""
    x_embed = _as_batch(x_embed, cfg.d_embed, "x_embed")
    x_aux = _as_batch(x_aux, cfg.d_aux, "x_aux")
    if x_embed.shape[0] != x_aux.shape[0]:
        raise ModelError("x_embed and x_aux batch sizes differ")

    if params.arch == ARCH_LOGISTIC:
        z = np.concatenate([x_embed, x_aux], axis=1)
        probs = softmax(z @ params.W3.T + params.b3)
        return ForwardTrace(
            x_embed=x_embed, x_aux=x_aux, h=None, z=z, hidden=None, o=z,
            probs=probs, dropout_mask=None,
        )

    h = None
    if cfg.d_aux > 0:
        h = np.maximum(x_aux @ params.W1.T + params.b1, 0.0)
        z = np.concatenate([x_embed, h], axis=1) if cfg.d_embed > 0 else h
    else:
        z = x_embed
    hidden = np.maximum(z @ params.W2.T + params.b2, 0.0)

    mask = None
    o = hidden
    if train_mode and cfg.dropout_rate > 0.0:
        if rng is None:
            raise ModelError("train-mode forward with dropout needs an rng")
        keep = 1.0 - cfg.dropout_rate
        mask = (rng.random(hidden.shape) < keep).astype(np.float64)
        o = hidden * mask / keep

    probs = softmax(o @ params.W3.T + params.b3)
    return ForwardTrace(
        x_embed=x_embed, x_aux=x_aux, h=h, z=z, hidden=hidden, o=o,
        probs=probs, dropout_mask=mask,
    )


def one_hot(labels: Sequence[int] | np.ndarray, n_classes: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    out = np.zeros((labels.shape[0], n_classes))
    out[np.arange(labels.shape[0]), labels] = 1.0
    return out


def loss(probs: np.ndarray, y_onehot: np.ndarray) -> LossValue:
    """Categorical cross-entropy; log inputs clamped at 1e-12.

    The total is the plain double sum over samples and classes; the
    optimizer consumes the per-sample mean.
    """
    probs = np.atleast_2d(probs)
    y_onehot = np.atleast_2d(y_onehot)
    if probs.shape != y_onehot.shape:
        raise ModelError("prediction and label batches differ in shape")
    total = float(-(y_onehot * np.log(np.maximum(probs, LOG_CLAMP))).sum())
    return LossValue(total=total, mean=total / probs.shape[0])


def backward(
    trace: ForwardTrace,
    y_onehot: np.ndarray,
    params: Parameters,
    cfg: ModelConfig,
) -> Gradients:
    """Analytic gradients of the mean cross-entropy w.r.t. all parameters."""
    y_onehot = np.atleast_2d(y_onehot)
    n = trace.probs.shape[0]
    d_logits = (trace.probs - y_onehot) / n

    grads = Gradients()
    grads.W3 = d_logits.T @ trace.o
    grads.b3 = d_logits.sum(axis=0)
    if params.arch == ARCH_LOGISTIC:
        return grads

    d_o = d_logits @ params.W3
    if trace.dropout_mask is not None:
        d_hidden = d_o * trace.dropout_mask / (1.0 - cfg.dropout_rate)
    else:
        d_hidden = d_o
    d_pre2 = d_hidden * (trace.hidden > 0.0)
    grads.W2 = d_pre2.T @ trace.z
    grads.b2 = d_pre2.sum(axis=0)

    if cfg.d_aux > 0:
        d_z = d_pre2 @ params.W2
        d_h = d_z[:, cfg.d_embed :]
        d_pre1 = d_h * (trace.h > 0.0)
        grads.W1 = d_pre1.T @ trace.x_aux
        grads.b1 = d_pre1.sum(axis=0)
    return grads


def adam_step(params: Parameters, grads: Gradients, cfg: ModelConfig) -> Parameters:
    """One bias-corrected Adam update, in place; returns ``params``.

    Bias corrections are folded into the step size, so epsilon sits next to
    the raw second-moment root: the first step on a scalar weight moves it
    by lr·|g| / (|g| + ε·(1−β2)^{-1/2}).
    """
    params.step += 1
    t = params.step
    b1, b2, eps = cfg.adam_beta1, cfg.adam_beta2, cfg.adam_epsilon
    alpha = cfg.learning_rate * math.sqrt(1.0 - b2**t) / (1.0 - b1**t)
    for name, weight in params.named_weights():
        grad = grads.get(name)
        if grad is None:
            raise ModelError(f"missing gradient for {name}")
        if name not in params.m:
            params.m[name] = np.zeros_like(weight)
            params.v[name] = np.zeros_like(weight)
        m = params.m[name]
        v = params.v[name]
        m *= b1
        m += (1.0 - b1) * grad
        v *= b2
        v += (1.0 - b2) * grad * grad
        weight -= alpha * m / (np.sqrt(v) + eps)
    return params


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    mean_loss: float
    val_micro_f1: float


@dataclass
class TrainResult:
    params: Parameters
    log: list[EpochStats]
    best_epoch: int
    best_val_f1: float
    train_indices: np.ndarray
    val_indices: np.ndarray

    def log_tsv(self) -> str:
        lines = ["epoch\tmean_loss\tval_micro_f1"]
        for row in self.log:
            lines.append(f"{row.epoch}\t{row.mean_loss!r}\t{row.val_micro_f1!r}")
        return "\n".join(lines) + "\n"


def stratified_split(
    labels: np.ndarray, fraction: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Per-class shuffled split; roughly ``fraction`` of each class goes to
    validation (round-half-up, so tiny classes stay in training)."""
    train_idx: list[int] = []
    val_idx: list[int] = []
    for label in np.unique(labels):
        members = np.flatnonzero(labels == label)
        members = members[rng.permutation(members.shape[0])]
        n_val = int(members.shape[0] * fraction + 0.5)
        val_idx.extend(members[:n_val].tolist())
        train_idx.extend(members[n_val:].tolist())
    return np.array(sorted(train_idx), dtype=np.int64), np.array(
        sorted(val_idx), dtype=np.int64
    )


def _stack_dataset(
    dataset: Sequence[tuple[FeatureBundle, TechniqueLabel]], cfg: ModelConfig
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if not dataset:
        raise ModelError("empty training dataset")
    x_embed = np.zeros((len(dataset), cfg.d_embed))
    x_aux = np.zeros((len(dataset), cfg.d_aux))
    labels = np.zeros(len(dataset), dtype=np.int64)
    for i, (bundle, label) in enumerate(dataset):
        embedding, aux = bundle.embedding, bundle.aux
        if embedding.shape[0] != cfg.d_embed:
            raise ModelError(
                f"bundle {bundle.key!r}: embedding width {embedding.shape[0]} "
                f"!= d_embed {cfg.d_embed}"
            )
        if aux.shape[0] != cfg.d_aux:
            raise ModelError(
                f"bundle {bundle.key!r}: aux width {aux.shape[0]} "
                f"!= d_aux {cfg.d_aux}"
            )
        x_embed[i] = embedding
        x_aux[i] = aux
        labels[i] = int(label)
        if labels[i] >= cfg.n_classes:
            raise ModelError(
                f"label index {labels[i]} out of range for {cfg.n_classes} classes"
            )
    return x_embed, x_aux, labels


def _micro_f1(
    params: Parameters, cfg: ModelConfig, x_embed: np.ndarray, x_aux: np.ndarray,
    labels: np.ndarray,
) -> float:
    # One prediction per example, so micro-F1 reduces to accuracy.
    trace = forward(x_embed, x_aux, params, cfg, train_mode=False)
    predicted = trace.probs.argmax(axis=1)
    return float(np.mean(predicted == labels))


def train(
    dataset: Sequence[tuple[FeatureBundle, TechniqueLabel]],
    cfg: ModelConfig,
    arch: str = ARCH_FUSION,
) -> TrainResult:
    """Mini-batch Adam training with a stratified validation split.

    Keeps the parameters from the best-validation epoch; stops early after
    ``cfg.patience`` epochs without improvement.
    """
    x_embed, x_aux, labels = _stack_dataset(dataset, cfg)
    missing = set(range(cfg.n_classes)) - set(np.unique(labels).tolist())
    if missing:
        logger.warning("classes with no training examples: %s", sorted(missing))

    rng = np.random.default_rng(cfg.seed)
    train_idx, val_idx = stratified_split(labels, cfg.validation_fraction, rng)
    if val_idx.size == 0:
        # Dataset too small to hold anything out; validate on the training
        # set so early stopping still has a signal.
        logger.warning("validation split is empty; validating on training data")
        val_idx = train_idx

    params = init_parameters(cfg, arch=arch)
    best_params = copy.deepcopy(params)
    best_f1 = -1.0
    best_epoch = 0
    epochs_since_best = 0
    log: list[EpochStats] = []

    y_onehot = one_hot(labels, cfg.n_classes)
    for epoch in range(1, cfg.max_epochs + 1):
        order = train_idx[rng.permutation(train_idx.shape[0])]
        epoch_total = 0.0
        for start in range(0, order.shape[0], cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            trace = forward(
                x_embed[batch], x_aux[batch], params, cfg, train_mode=True, rng=rng
            )
            epoch_total += loss(trace.probs, y_onehot[batch]).total
            grads = backward(trace, y_onehot[batch], params, cfg)
            adam_step(params, grads, cfg)
        val_f1 = _micro_f1(params, cfg, x_embed[val_idx], x_aux[val_idx], labels[val_idx])
        log.append(
            EpochStats(
                epoch=epoch,
                mean_loss=epoch_total / order.shape[0],
                val_micro_f1=val_f1,
            )
        )
        if val_f1 > best_f1:
            best_f1 = val_f1
            best_epoch = epoch
            best_params = copy.deepcopy(params)
            epochs_since_best = 0
        else:
            epochs_since_best += 1
            if epochs_since_best >= cfg.patience:
                break

    return TrainResult(
        params=best_params,
        log=log,
        best_epoch=best_epoch,
        best_val_f1=max(best_f1, 0.0),
        train_indices=train_idx,
        val_indices=val_idx,
    )


def train_logistic_baseline(
    dataset: Sequence[tuple[FeatureBundle, TechniqueLabel]], cfg: ModelConfig
) -> TrainResult:
    """Softmax regression on the raw concatenated features."""
    return train(dataset, cfg, arch=ARCH_LOGISTIC)


def predict(
    x_embed: np.ndarray,
    x_aux: np.ndarray,
    params: Parameters,
    cfg: ModelConfig,
) -> tuple[TechniqueLabel, np.ndarray]:
    """Evaluation-mode prediction for one sample; argmax ties resolve to
    the lowest class index."""
    trace = forward(x_embed, x_aux, params, cfg, train_mode=False)
    probs = trace.probs[0]
    return TechniqueLabel(int(probs.argmax())), probs


def predict_batch(
    x_embed: np.ndarray,
    x_aux: np.ndarray,
    params: Parameters,
    cfg: ModelConfig,
) -> tuple[np.ndarray, np.ndarray]:
    trace = forward(x_embed, x_aux, params, cfg, train_mode=False)
    return trace.probs.argmax(axis=1), trace.probs
