"""scikit-learn style classifier wrapping the numpy training engine."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from .nn.checkpoint import load_checkpoint, save_checkpoint
from .nn.model import build_cnn_model, build_fc_model, init_params
from .training import TrainConfig, predict_proba, train
from .validation import check_image_array, check_labels


class GlyphClassifier(BaseEstimator, ClassifierMixin):
    """28x28 grayscale glyph classifier with a fit/predict interface.

    Parameters
    ----------
    arch : "cnn" or "fc"
        Two-conv-layer network or three-dense-layer network.
    conv_filters, dense_units : pairs controlling layer widths; the defaults
        are the full-size architectures (116,109 and 1,335,309 parameters
        for 13 classes).
    epochs, batch_size, lr, seed : training budget and determinism knobs.
    patience : optional early stop after this many epochs without validation
        improvement (requires validation data passed to fit).
    """

    def __init__(self, arch: str = "cnn", conv_filters: tuple[int, int] = (64, 128),
                 dense_units: tuple[int, int] = (1024, 512), epochs: int = 20,
                 batch_size: int = 128, lr: float = 1e-3, seed: int = 0,
                 patience: int | None = None, verbose: bool = False):
        self.arch = arch
        self.conv_filters = conv_filters
        self.dense_units = dense_units
        self.epochs = epochs
        self.batch_size = batch_size
        self.lr = lr
        self.seed = seed
        self.patience = patience
        self.verbose = verbose

    def _build(self, n_classes: int):
        if self.arch == "cnn":
            return build_cnn_model(filters=tuple(self.conv_filters), n_classes=n_classes)
        if self.arch == "fc":
            return build_fc_model(units=tuple(self.dense_units), n_classes=n_classes)
        raise ValueError(f"arch must be 'cnn' or 'fc', got {self.arch!r}")

    def fit(self, X, y, validation=None):
        """Train from scratch on X (n, 28, 28[, 1]) or (n, 784), labels y.

        validation: optional (X_val, y_val) pair scored once per epoch.
        """
        X = check_image_array(X)
        y = check_labels(y, X.shape[0])
        self.classes_ = np.unique(y)
        index_of = {label: i for i, label in enumerate(self.classes_.tolist())}
        y_idx = np.array([index_of[v] for v in y.tolist()], dtype=np.int64)

        val_data = None
        if validation is not None:
            X_val = check_image_array(validation[0], name="X_val")
            y_val = check_labels(validation[1], X_val.shape[0])
            val_data = (X_val, np.array([index_of[v] for v in y_val.tolist()], dtype=np.int64))

        self.model_ = init_params(self._build(len(self.classes_)), self.seed)
        cfg = TrainConfig(epochs=self.epochs, batch_size=self.batch_size,
                          lr=self.lr, seed=self.seed, patience=self.patience)
        self.history_ = train(self.model_, (X, y_idx), val_data, cfg, verbose=self.verbose)
        return self

    def _check_fitted(self):
        if not hasattr(self, "model_"):
            raise NotFittedError("this classifier has not been fitted yet")

    def predict_proba(self, X) -> np.ndarray:
        self._check_fitted()
        return predict_proba(self.model_, check_image_array(X))

    def predict(self, X) -> np.ndarray:
        return self.classes_[self.predict_proba(X).argmax(axis=1)]

    def param_count(self) -> int:
        self._check_fitted()
        return self.model_.param_count()

    def save(self, path) -> None:
        """Persist the fitted weights as a binary checkpoint."""
        self._check_fitted()
        save_checkpoint(self.model_, path)

    @classmethod
    def from_checkpoint(cls, path) -> "GlyphClassifier":
        """Rebuild a fitted classifier from a checkpoint. Class labels are
        restored as 0..n_classes-1 (the label encoding used by the CLI)."""
        model = load_checkpoint(path)
        est = cls(arch=model.kind)
        if model.kind == "cnn":
            est.conv_filters = model.widths
        else:
            est.dense_units = model.widths
        est.model_ = model
        est.classes_ = np.arange(model.n_classes)
        est.history_ = []
        return est
