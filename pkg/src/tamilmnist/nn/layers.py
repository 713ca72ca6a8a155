"""Forward/backward primitives for the handful of layers the models need.

All activations are NHWC-batched numpy arrays. Convolution is 3x3 with valid
padding, pooling is 2x2 stride 2 with floor semantics on odd edges; these are
the only variants used, so they are hard-wired rather than parameterized.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

KERNEL = 3
POOL = 2


def conv2d_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """x: (N, H, W, C), w: (3, 3, C, F), b: (F,) -> (N, H-2, W-2, F)."""
    n, h, width, c = x.shape
    windows = sliding_window_view(x, (KERNEL, KERNEL), axis=(1, 2))
    # (N, OH, OW, C, di, dj) -> columns ordered (di, dj, c) to match w's layout
    cols = np.ascontiguousarray(windows.transpose(0, 1, 2, 4, 5, 3))
    oh, ow = h - KERNEL + 1, width - KERNEL + 1
    out = cols.reshape(n * oh * ow, KERNEL * KERNEL * c) @ w.reshape(-1, w.shape[-1])
    return out.reshape(n, oh, ow, w.shape[-1]) + b


def conv2d_backward(dy: np.ndarray, x: np.ndarray, w: np.ndarray):
    """Gradients for conv2d_forward; returns (dx, dw, db)."""
    n, h, width, c = x.shape
    f = w.shape[-1]
    oh, ow = h - KERNEL + 1, width - KERNEL + 1
    dy_mat = dy.reshape(n * oh * ow, f)

    windows = sliding_window_view(x, (KERNEL, KERNEL), axis=(1, 2))
    cols = np.ascontiguousarray(windows.transpose(0, 1, 2, 4, 5, 3))
    dw = (cols.reshape(n * oh * ow, -1).T @ dy_mat).reshape(w.shape)
    db = dy_mat.sum(axis=0)

    # dx is the full correlation of dy with the spatially flipped kernel.
    pad = KERNEL - 1
    dy_pad = np.pad(dy, ((0, 0), (pad, pad), (pad, pad), (0, 0)))
    dwin = sliding_window_view(dy_pad, (KERNEL, KERNEL), axis=(1, 2))
    dcols = np.ascontiguousarray(dwin.transpose(0, 1, 2, 4, 5, 3))  # (N, H, W, a, b, f)
    w_flip = w[::-1, ::-1].transpose(0, 1, 3, 2)  # (a, b, f, c)
    dx = dcols.reshape(n * h * width, -1) @ w_flip.reshape(-1, c)
    return dx.reshape(x.shape), dw, db


def maxpool2d_forward(x: np.ndarray):
    """2x2/stride-2 max pooling, discarding trailing odd rows/columns.

    Returns (y, argmax) where argmax holds the winning in-block flat index
    (row-major, first occurrence on ties) needed by the backward pass.
    """
    n, h, w, c = x.shape
    oh, ow = h // POOL, w // POOL
    blocks = (x[:, : oh * POOL, : ow * POOL, :]
              .reshape(n, oh, POOL, ow, POOL, c)
              .transpose(0, 1, 3, 2, 4, 5)
              .reshape(n, oh, ow, POOL * POOL, c))
    idx = blocks.argmax(axis=3)
    y = np.take_along_axis(blocks, idx[:, :, :, None, :], axis=3)[:, :, :, 0, :]
    return y, idx


def maxpool2d_backward(dy: np.ndarray, idx: np.ndarray, in_shape: tuple) -> np.ndarray:
    """Route each upstream gradient to its block's argmax position."""
    n, h, w, c = in_shape
    oh, ow = h // POOL, w // POOL
    blocks = np.zeros((n, oh, ow, POOL * POOL, c), dtype=dy.dtype)
    np.put_along_axis(blocks, idx[:, :, :, None, :], dy[:, :, :, None, :], axis=3)
    dx_even = (blocks.reshape(n, oh, ow, POOL, POOL, c)
               .transpose(0, 1, 3, 2, 4, 5)
               .reshape(n, oh * POOL, ow * POOL, c))
    if (oh * POOL, ow * POOL) == (h, w):
        return dx_even
    dx = np.zeros(in_shape, dtype=dy.dtype)
    dx[:, : oh * POOL, : ow * POOL, :] = dx_even
    return dx


def relu_forward(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0)


def relu_backward(dy: np.ndarray, x: np.ndarray) -> np.ndarray:
    return dy * (x > 0)


def dense_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    return x @ w + b


def dense_backward(dy: np.ndarray, x: np.ndarray, w: np.ndarray):
    return dy @ w.T, x.T @ dy, dy.sum(axis=0)


def softmax(logits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Max-shifted softmax; returns (probs, log_probs) per row."""
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    total = exp.sum(axis=-1, keepdims=True)
    return exp / total, shifted - np.log(total)
