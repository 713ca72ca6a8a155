"""Mini-batch Adam training loop with per-epoch history."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteLossError
from .nn.adam import Adam
from .nn.model import Model

DEFAULT_BATCH_SIZE = 128
DEFAULT_LR = 1e-3


@dataclass(frozen=True)
class TrainConfig:
    epochs: int
    batch_size: int = DEFAULT_BATCH_SIZE
    lr: float = DEFAULT_LR
    seed: int = 0
    patience: int | None = None  # stop after this many epochs without val improvement

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


def to_model_input(images: np.ndarray, dtype=np.float32) -> np.ndarray:
    """uint8 (n, 28, 28) rasters -> (n, 28, 28, 1) floats in [0, 1]."""
    x = np.asarray(images)
    if x.ndim == 3:
        x = x[..., None]
    x = x.astype(dtype)
    if x.size and x.max() > 1.5:
        x = x / dtype(255.0)
    return x


def predict_proba(model: Model, x: np.ndarray, batch_size: int = 512) -> np.ndarray:
    out = []
    for lo in range(0, x.shape[0], batch_size):
        probs, _ = model.forward(x[lo:lo + batch_size])
        out.append(probs)
    return np.concatenate(out, axis=0)


def accuracy(model: Model, x: np.ndarray, y: np.ndarray) -> float:
    probs = predict_proba(model, x)
    return float((probs.argmax(axis=1) == y).mean())


def train(
    model: Model,
    train_data: tuple[np.ndarray, np.ndarray],
    val_data: tuple[np.ndarray, np.ndarray] | None,
    cfg: TrainConfig,
    verbose: bool = False,
) -> list[dict]:
    """Train in place; returns one history row per epoch with keys
    epoch, train_loss, train_accuracy, val_accuracy (None without val data).

    Batch order is a fresh seeded shuffle each epoch; train metrics are
    running averages over the epoch's batches. Raises NonFiniteLossError as
    soon as a batch loss stops being finite.
    """
    x_train, y_train = train_data
    if x_train.shape[0] == 0:
        raise ValueError("training set is empty")
    y_train = np.asarray(y_train, dtype=np.int64)
    optimizer = Adam(lr=cfg.lr)
    rng = np.random.default_rng(cfg.seed)
    n = x_train.shape[0]

    history: list[dict] = []
    best_val, since_best = -math.inf, 0
    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        total_loss, total_correct = 0.0, 0
        for lo in range(0, n, cfg.batch_size):
            batch = order[lo:lo + cfg.batch_size]
            xb, yb = x_train[batch], y_train[batch]
            probs, cache = model.forward(xb, train_mode=True)
            loss, grads = model.backward(cache, yb)
            if not math.isfinite(loss):
                raise NonFiniteLossError(
                    f"loss became {loss} at epoch {epoch + 1}, sample offset {lo}")
            optimizer.step(model.params, grads)
            total_loss += loss * len(batch)
            total_correct += int((probs.argmax(axis=1) == yb).sum())

        row = {
            "epoch": epoch + 1,
            "train_loss": total_loss / n,
            "train_accuracy": total_correct / n,
            "val_accuracy": None,
        }
        if val_data is not None:
            row["val_accuracy"] = accuracy(model, val_data[0], val_data[1])
        history.append(row)
        if verbose:
            val_txt = "" if row["val_accuracy"] is None else f"  val_acc={row['val_accuracy']:.4f}"
            print(f"epoch {row['epoch']:3d}  loss={row['train_loss']:.4f}"
                  f"  acc={row['train_accuracy']:.4f}{val_txt}", flush=True)

        if cfg.patience is not None and row["val_accuracy"] is not None:
            if row["val_accuracy"] > best_val:
                best_val, since_best = row["val_accuracy"], 0
            else:
                since_best += 1
                if since_best >= cfg.patience:
                    break
    return history
