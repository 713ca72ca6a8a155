"""Versioned binary weight checkpoints.

Layout (little-endian): 4-byte magic, u32 format version, 1-byte model kind,
u32 class count, two u32 width fields (dense units or conv filters), then for
each parameter tensor in layer order (weights before biases): u8 ndim,
u32 dims, raw float32 data. Loading rebuilds the architecture from the header
and validates every tensor against the builder's expected shape.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import BadMagicError, ShapeMismatchError, TruncatedFileError
from .model import Model, build_model

MAGIC = b"TMCK"
VERSION = 1
_KIND_CODE = {"fc": 0, "cnn": 1}
_CODE_KIND = {v: k for k, v in _KIND_CODE.items()}


def _tensors(model: Model):
    for p in model.params:
        for key in ("w", "b"):
            if key in p:
                yield p, key


def save_checkpoint(model: Model, path: str | Path) -> None:
    with Path(path).open("wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IBIII", VERSION, _KIND_CODE[model.kind],
                             model.n_classes, model.widths[0], model.widths[1]))
        for p, key in _tensors(model):
            t = np.ascontiguousarray(p[key], dtype="<f4")
            fh.write(struct.pack("<B", t.ndim))
            fh.write(struct.pack(f"<{t.ndim}I", *t.shape))
            fh.write(t.tobytes())


def _read(fh, n: int, path, what: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise TruncatedFileError(f"{path}: truncated while reading {what}")
    return data


def load_checkpoint(path: str | Path, dtype=np.float32) -> Model:
    path = Path(path)
    with path.open("rb") as fh:
        if _read(fh, 4, path, "magic") != MAGIC:
            raise BadMagicError(f"{path}: not a model checkpoint")
        version, kind_code, n_classes, wa, wb = struct.unpack("<IBIII", _read(fh, 17, path, "header"))
        if version != VERSION:
            raise BadMagicError(f"{path}: unsupported checkpoint version {version}")
        if kind_code not in _CODE_KIND:
            raise BadMagicError(f"{path}: unknown model kind code {kind_code}")
        kind = _CODE_KIND[kind_code]
        key = "units" if kind == "fc" else "filters"
        model = build_model(kind, **{key: (wa, wb)}, n_classes=n_classes, dtype=dtype)
        for p, k in _tensors(model):
            (ndim,) = struct.unpack("<B", _read(fh, 1, path, "tensor rank"))
            shape = struct.unpack(f"<{ndim}I", _read(fh, 4 * ndim, path, "tensor shape"))
            expected = p[k].shape
            if shape != expected:
                raise ShapeMismatchError(
                    f"{path}: tensor shape {shape} does not match architecture {expected}")
            raw = _read(fh, 4 * int(np.prod(shape)), path, "tensor data")
            p[k] = np.frombuffer(raw, dtype="<f4").reshape(shape).astype(dtype)
        if fh.read(1):
            raise ShapeMismatchError(f"{path}: trailing bytes after last tensor")
    return model
