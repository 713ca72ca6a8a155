"""Independent brute-force reference implementations used by the tests.

Everything here is written as plain scalar loops against the operation
definitions, deliberately sharing no code with the vectorized package paths
it checks.
"""

from __future__ import annotations

import math

import numpy as np


def bilinear_rotate_translate(src: np.ndarray, angle_deg: float, dx: int, dy: int) -> np.ndarray:
    """Per-pixel inverse-mapped bilinear resampling, zero outside the grid."""
    n = src.shape[0]
    center = (n - 1) / 2.0
    psi = math.radians(-angle_deg)
    cos_p, sin_p = math.cos(psi), math.sin(psi)
    out = np.zeros_like(src)

    def pix(r, c):
        if 0 <= r < n and 0 <= c < n:
            return float(src[r, c])
        return 0.0

    for r in range(n):
        for c in range(n):
            sr = center + cos_p * (r - center) - sin_p * (c - center) - dy
            sc = center + sin_p * (r - center) + cos_p * (c - center) - dx
            r0, c0 = math.floor(sr), math.floor(sc)
            fr, fc = sr - r0, sc - c0
            val = ((1.0 - fr) * (1.0 - fc) * pix(r0, c0)
                   + (1.0 - fr) * fc * pix(r0, c0 + 1)
                   + fr * (1.0 - fc) * pix(r0 + 1, c0)
                   + fr * fc * pix(r0 + 1, c0 + 1))
            out[r, c] = min(255, max(0, math.floor(val + 0.5)))
    return out


def conv2d_loops(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Five nested loops over the valid-convolution definition."""
    n, h, width, c = x.shape
    k, _, _, f = w.shape
    out = np.zeros((n, h - k + 1, width - k + 1, f), dtype=np.float64)
    for bi in range(n):
        for i in range(h - k + 1):
            for j in range(width - k + 1):
                for fi in range(f):
                    acc = float(b[fi])
                    for di in range(k):
                        for dj in range(k):
                            for ci in range(c):
                                acc += x[bi, i + di, j + dj, ci] * w[di, dj, ci, fi]
                    out[bi, i, j, fi] = acc
    return out


def maxpool_loops(x: np.ndarray) -> np.ndarray:
    """Blockwise max over disjoint 2x2 blocks, flooring odd edges."""
    n, h, w, c = x.shape
    oh, ow = h // 2, w // 2
    out = np.zeros((n, oh, ow, c), dtype=x.dtype)
    for bi in range(n):
        for i in range(oh):
            for j in range(ow):
                for ci in range(c):
                    block = [x[bi, 2 * i + di, 2 * j + dj, ci]
                             for di in range(2) for dj in range(2)]
                    out[bi, i, j, ci] = max(block)
    return out


def area_downscale(img: np.ndarray, out_size: int = 28) -> np.ndarray:
    """Exact box-overlap area average, one output pixel at a time."""
    h, w = img.shape
    out = np.zeros((out_size, out_size), dtype=np.float64)
    bh, bw = h / out_size, w / out_size
    for i in range(out_size):
        for j in range(out_size):
            r_lo, r_hi = i * bh, (i + 1) * bh
            c_lo, c_hi = j * bw, (j + 1) * bw
            acc = 0.0
            for r in range(math.floor(r_lo), math.ceil(r_hi)):
                for c in range(math.floor(c_lo), math.ceil(c_hi)):
                    cover_r = min(r_hi, r + 1) - max(r_lo, r)
                    cover_c = min(c_hi, c + 1) - max(c_lo, c)
                    if cover_r > 0 and cover_c > 0:
                        acc += cover_r * cover_c * float(img[r, c])
            out[i, j] = acc / (bh * bw)
    return out


def topk_accuracies(probs: np.ndarray, labels: np.ndarray, ks: tuple[int, ...]) -> dict[int, float]:
    """Brute-force ranking: sort (descending prob, ascending index) per row."""
    n, n_classes = probs.shape
    hits = {k: 0 for k in ks}
    for i in range(n):
        ranked = sorted(range(n_classes), key=lambda j: (-probs[i, j], j))
        for k in ks:
            if labels[i] in ranked[:k]:
                hits[k] += 1
    return {k: hits[k] / n for k in ks}


def adam_sequence(g_values: list[float], lr=1e-3, b1=0.9, b2=0.999, eps=1e-8,
                  theta0: float = 0.0) -> list[float]:
    """Scalar transcription of the update equations, one value per step."""
    m = v = 0.0
    theta = theta0
    out = []
    for t, g in enumerate(g_values, start=1):
        m = b1 * m + (1 - b1) * g
        v = b2 * v + (1 - b2) * g * g
        m_hat = m / (1 - b1 ** t)
        v_hat = v / (1 - b2 ** t)
        theta = theta - lr * m_hat / (math.sqrt(v_hat) + eps)
        out.append(theta)
    return out


def finite_difference_grads(model, x: np.ndarray, labels: np.ndarray, h: float = 1e-4):
    """Central finite differences of the loss over every parameter entry.

    Returns a list of dicts congruent with model.params. Assumes the model
    holds float64 parameters.
    """
    grads = []
    for p in model.params:
        g = {}
        for key, tensor in p.items():
            gt = np.zeros_like(tensor)
            flat = tensor.ravel()
            gflat = gt.ravel()
            for idx in range(flat.size):
                orig = flat[idx]
                flat[idx] = orig + h
                loss_plus = model.loss(x, labels)
                flat[idx] = orig - h
                loss_minus = model.loss(x, labels)
                flat[idx] = orig
                gflat[idx] = (loss_plus - loss_minus) / (2.0 * h)
            g[key] = gt
        grads.append(g)
    return grads


def max_relative_error(analytic, numeric, floor: float = 1e-6) -> float:
    """max over parameters of |a - n| / max(|a|, |n|, floor)."""
    worst = 0.0
    for pa, pn in zip(analytic, numeric):
        for key in pa:
            a, n = pa[key].ravel(), pn[key].ravel()
            denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
            worst = max(worst, float((np.abs(a - n) / denom).max()))
    return worst
