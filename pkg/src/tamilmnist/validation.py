"""Input validation helpers for the estimator API."""

from __future__ import annotations

import numpy as np

from .fontrender import CANVAS


def check_image_array(X, *, name: str = "X") -> np.ndarray:
    """Coerce X to float32 (n, 28, 28, 1) in [0, 1].

    Accepts (n, 784), (n, 28, 28) or (n, 28, 28, 1); uint8-range inputs are
    rescaled by 1/255. Rejects non-finite values.
    """
    X = np.asarray(X)
    if X.ndim == 2 and X.shape[1] == CANVAS * CANVAS:
        X = X.reshape(-1, CANVAS, CANVAS)
    if X.ndim == 3:
        X = X[..., None]
    if X.ndim != 4 or X.shape[1:] != (CANVAS, CANVAS, 1):
        raise ValueError(
            f"{name} must be (n, 784), (n, {CANVAS}, {CANVAS}) or (n, {CANVAS}, {CANVAS}, 1); "
            f"got shape {np.asarray(X).shape}")
    X = X.astype(np.float32)
    if not np.isfinite(X).all():
        raise ValueError(f"{name} contains non-finite values")
    if X.size and X.max() > 1.5:
        X = X / np.float32(255.0)
    return X


def check_labels(y, n_samples: int) -> np.ndarray:
    y = np.asarray(y)
    if y.ndim != 1 or y.shape[0] != n_samples:
        raise ValueError(f"y must be 1-D with {n_samples} entries, got shape {y.shape}")
    if not np.issubdtype(y.dtype, np.integer):
        y_int = y.astype(np.int64)
        if not np.array_equal(y_int, y):
            raise ValueError("y must contain integer class labels")
        y = y_int
    return y.astype(np.int64)
