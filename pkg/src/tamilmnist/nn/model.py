"""Model definition, shape inference, initialization, and forward/backward.

Two architectures are supported, both ending in a 13-way softmax by default:

  fc:  flatten -> dense(1024)+relu -> dense(512)+relu -> dense(13) -> softmax
  cnn: conv(64)+relu -> pool -> conv(128)+relu -> pool -> flatten
       -> dense(13) -> softmax

Widths and class count are parameterizable so tests can run reduced models
with identical structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ShapeMismatchError
from . import layers as L

INPUT_HW = 28

FLATTEN = "flatten"
DENSE = "dense"
CONV = "conv2d"
MAXPOOL = "maxpool2d"
RELU = "relu"
SOFTMAX = "softmax"


@dataclass(frozen=True)
class LayerSpec:
    kind: str
    units: int = 0  # dense units or conv filters


@dataclass
class Model:
    kind: str  # "fc" | "cnn"
    widths: tuple[int, int]
    n_classes: int
    specs: list[LayerSpec]
    input_shape: tuple[int, ...]  # per-sample, e.g. (28, 28, 1)
    dtype: np.dtype = np.dtype(np.float32)
    params: list[dict[str, np.ndarray]] = field(default_factory=list)
    activation_shapes: list[tuple[int, ...]] = field(default_factory=list)

    def param_count(self) -> int:
        return sum(int(t.size) for p in self.params for t in p.values())

    def forward(self, x: np.ndarray, train_mode: bool = False):
        """Run the network; returns (probs, cache). cache is None unless
        train_mode, in which case it holds what backward needs."""
        x = np.asarray(x, dtype=self.dtype)
        if x.ndim != len(self.input_shape) + 1 or x.shape[1:] != self.input_shape:
            raise ShapeMismatchError(
                f"expected input (n, {', '.join(map(str, self.input_shape))}), got {x.shape}")
        saved: list = []
        log_probs = None
        for spec, p in zip(self.specs, self.params):
            if spec.kind == FLATTEN:
                saved.append(x.shape)
                x = x.reshape(x.shape[0], -1)
            elif spec.kind == DENSE:
                saved.append(x)
                x = L.dense_forward(x, p["w"], p["b"])
            elif spec.kind == CONV:
                saved.append(x)
                x = L.conv2d_forward(x, p["w"], p["b"])
            elif spec.kind == MAXPOOL:
                in_shape = x.shape
                x, idx = L.maxpool2d_forward(x)
                saved.append((idx, in_shape))
            elif spec.kind == RELU:
                saved.append(x)
                x = L.relu_forward(x)
            elif spec.kind == SOFTMAX:
                x, log_probs = L.softmax(x)
                saved.append(None)
        cache = (saved, x, log_probs) if train_mode else None
        return x, cache

    def backward(self, cache, labels: np.ndarray):
        """Mean cross-entropy loss and its gradients for every parameter.

        Returns (loss, grads) with grads aligned to self.params. The gradient
        at the logits is (probs - onehot) / batch_size.
        """
        saved, probs, log_probs = cache
        labels = np.asarray(labels)
        n = probs.shape[0]
        if labels.shape != (n,):
            raise ShapeMismatchError(f"labels must be ({n},), got {labels.shape}")
        loss = -float(log_probs[np.arange(n), labels].mean())

        grads: list[dict[str, np.ndarray]] = [{} for _ in self.specs]
        dx = probs.copy()
        dx[np.arange(n), labels] -= 1.0
        dx /= n
        for i in range(len(self.specs) - 1, -1, -1):
            spec, p, cached = self.specs[i], self.params[i], saved[i]
            if spec.kind == SOFTMAX:
                continue  # fused with the cross-entropy gradient above
            if spec.kind == FLATTEN:
                dx = dx.reshape(cached)
            elif spec.kind == DENSE:
                dx, dw, db = L.dense_backward(dx, cached, p["w"])
                grads[i] = {"w": dw, "b": db}
            elif spec.kind == CONV:
                dx, dw, db = L.conv2d_backward(dx, cached, p["w"])
                grads[i] = {"w": dw, "b": db}
            elif spec.kind == MAXPOOL:
                idx, in_shape = cached
                dx = L.maxpool2d_backward(dx, idx, in_shape)
            elif spec.kind == RELU:
                dx = L.relu_backward(dx, cached)
        return loss, grads

    def loss(self, x: np.ndarray, labels: np.ndarray) -> float:
        _, cache = self.forward(x, train_mode=True)
        log_probs = cache[2]
        return -float(log_probs[np.arange(len(labels)), labels].mean())


def _infer(specs: list[LayerSpec], input_shape: tuple[int, ...], dtype) -> tuple[list, list]:
    """Walk the layer chain computing activation shapes and allocating
    zeroed parameter tensors."""
    shape = input_shape
    params: list[dict[str, np.ndarray]] = []
    shapes = [shape]
    for spec in specs:
        if spec.kind == FLATTEN:
            shape = (int(np.prod(shape)),)
            params.append({})
        elif spec.kind == DENSE:
            (k,) = shape
            params.append({"w": np.zeros((k, spec.units), dtype=dtype),
                           "b": np.zeros(spec.units, dtype=dtype)})
            shape = (spec.units,)
        elif spec.kind == CONV:
            h, w, c = shape
            params.append({"w": np.zeros((L.KERNEL, L.KERNEL, c, spec.units), dtype=dtype),
                           "b": np.zeros(spec.units, dtype=dtype)})
            shape = (h - L.KERNEL + 1, w - L.KERNEL + 1, spec.units)
        elif spec.kind == MAXPOOL:
            h, w, c = shape
            shape = (h // L.POOL, w // L.POOL, c)
            params.append({})
        else:
            params.append({})
        shapes.append(shape)
    return params, shapes


def _make(kind, widths, n_classes, specs, input_shape, dtype) -> Model:
    dtype = np.dtype(dtype)
    params, shapes = _infer(specs, input_shape, dtype)
    return Model(kind=kind, widths=widths, n_classes=n_classes, specs=specs,
                 input_shape=input_shape, dtype=dtype, params=params,
                 activation_shapes=shapes)


def build_fc_model(units: tuple[int, int] = (1024, 512), n_classes: int = 13,
                   dtype=np.float32) -> Model:
    specs = [
        LayerSpec(FLATTEN),
        LayerSpec(DENSE, units[0]), LayerSpec(RELU),
        LayerSpec(DENSE, units[1]), LayerSpec(RELU),
        LayerSpec(DENSE, n_classes),
        LayerSpec(SOFTMAX),
    ]
    return _make("fc", tuple(units), n_classes, specs, (INPUT_HW, INPUT_HW, 1), dtype)


def build_cnn_model(filters: tuple[int, int] = (64, 128), n_classes: int = 13,
                    dtype=np.float32, input_hw: int = INPUT_HW) -> Model:
    specs = [
        LayerSpec(CONV, filters[0]), LayerSpec(RELU), LayerSpec(MAXPOOL),
        LayerSpec(CONV, filters[1]), LayerSpec(RELU), LayerSpec(MAXPOOL),
        LayerSpec(FLATTEN),
        LayerSpec(DENSE, n_classes),
        LayerSpec(SOFTMAX),
    ]
    return _make("cnn", tuple(filters), n_classes, specs, (input_hw, input_hw, 1), dtype)


def build_model(kind: str, **kwargs) -> Model:
    if kind == "fc":
        return build_fc_model(**kwargs)
    if kind == "cnn":
        return build_cnn_model(**kwargs)
    raise ValueError(f"unknown model kind {kind!r}")


def init_params(model: Model, seed: int) -> Model:
    """Glorot-uniform weights (a = sqrt(6 / (fan_in + fan_out))), zero biases.

    For conv kernels the fans include the receptive field:
    fan_in = 9 * c_in, fan_out = 9 * filters. Deterministic given the seed.
    """
    rng = np.random.default_rng(seed)
    for spec, p in zip(model.specs, model.params):
        if not p:
            continue
        w = p["w"]
        if spec.kind == DENSE:
            fan_in, fan_out = w.shape
        else:  # conv: (3, 3, c, f)
            fan_in = w.shape[0] * w.shape[1] * w.shape[2]
            fan_out = w.shape[0] * w.shape[1] * w.shape[3]
        a = np.sqrt(6.0 / (fan_in + fan_out))
        p["w"] = rng.uniform(-a, a, size=w.shape).astype(model.dtype)
        p["b"] = np.zeros_like(p["b"])
    return model


def param_count(model: Model) -> int:
    return model.param_count()
