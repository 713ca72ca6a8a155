"""Rotation/translation augmentation with bilinear resampling, plus the
border-ink overflow filter that drops glyphs spilling past the 28 px square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fontrender import CANVAS, CANVAS_CENTER
from .numutil import floor_scaled

KIND_CLEAN = "clean"
KIND_ROTATE = "rotate"
KIND_ROTATE_TRANSLATE = "rotate_translate"

DEFAULT_FRAC_ROTATE = 0.35
DEFAULT_FRAC_ROTATE_TRANSLATE = 0.15
DEFAULT_MAX_ANGLE_DEG = 15.0
DEFAULT_MAX_SHIFT_PX = 5
DEFAULT_OVERFLOW_BORDER = 1
DEFAULT_OVERFLOW_THRESHOLD = 32


@dataclass(frozen=True)
class AugmentPolicy:
    """Mix fractions, ranges and seed for the augmentation pass."""

    frac_rotate_only: float = DEFAULT_FRAC_ROTATE
    frac_rotate_translate: float = DEFAULT_FRAC_ROTATE_TRANSLATE
    max_angle_deg: float = DEFAULT_MAX_ANGLE_DEG
    max_shift_px: int = DEFAULT_MAX_SHIFT_PX
    seed: int = 0

    def __post_init__(self) -> None:
        if self.frac_rotate_only < 0 or self.frac_rotate_translate < 0:
            raise ValueError("mix fractions must be >= 0")
        if self.frac_rotate_only + self.frac_rotate_translate > 1:
            raise ValueError("mix fractions must sum to <= 1")
        if self.max_angle_deg <= 0:
            raise ValueError("max_angle_deg must be > 0")
        if self.max_shift_px < 0:
            raise ValueError("max_shift_px must be >= 0")


@dataclass(frozen=True)
class TransformRecord:
    """The transform applied to one sample."""

    kind: str
    angle_deg: float = 0.0
    dx: int = 0
    dy: int = 0

    def __post_init__(self) -> None:
        if self.kind not in (KIND_CLEAN, KIND_ROTATE, KIND_ROTATE_TRANSLATE):
            raise ValueError(f"unknown transform kind {self.kind!r}")
        if self.kind == KIND_CLEAN and (self.angle_deg, self.dx, self.dy) != (0.0, 0, 0):
            raise ValueError("clean records carry no transform parameters")
        if self.kind == KIND_ROTATE and (self.dx, self.dy) != (0, 0):
            raise ValueError("rotate-only records carry no shift")


def rotate_translate(src: np.ndarray, angle_deg: float, dx: int, dy: int) -> np.ndarray:
    """Rotate about the canvas center then shift by (dx, dy) pixels,
    resampling bilinearly with zero fill outside the source grid.

    Each output pixel is sampled from the inverse-mapped source location;
    values are rounded half away from zero and clamped to 0..255. The
    identity transform (0, 0, 0) returns a bit-identical copy.
    """
    if src.shape != (CANVAS, CANVAS):
        raise ValueError(f"expected {CANVAS}x{CANVAS} raster, got {src.shape}")
    pix = src.astype(np.float64)

    rows, cols = np.meshgrid(np.arange(CANVAS, dtype=np.float64),
                             np.arange(CANVAS, dtype=np.float64), indexing="ij")
    psi = math.radians(-angle_deg)
    cos_p, sin_p = math.cos(psi), math.sin(psi)
    dr = rows - CANVAS_CENTER
    dc = cols - CANVAS_CENTER
    src_r = CANVAS_CENTER + cos_p * dr - sin_p * dc - dy
    src_c = CANVAS_CENTER + sin_p * dr + cos_p * dc - dx

    r0 = np.floor(src_r)
    c0 = np.floor(src_c)
    fr = src_r - r0
    fc = src_c - c0
    r0 = r0.astype(np.int64)
    c0 = c0.astype(np.int64)

    def sample(r, c):
        inside = (r >= 0) & (r < CANVAS) & (c >= 0) & (c < CANVAS)
        return np.where(inside, pix[np.clip(r, 0, CANVAS - 1), np.clip(c, 0, CANVAS - 1)], 0.0)

    val = ((1.0 - fr) * (1.0 - fc) * sample(r0, c0)
           + (1.0 - fr) * fc * sample(r0, c0 + 1)
           + fr * (1.0 - fc) * sample(r0 + 1, c0)
           + fr * fc * sample(r0 + 1, c0 + 1))
    return np.clip(np.floor(val + 0.5), 0, 255).astype(np.uint8)


def apply_transform(src: np.ndarray, record: TransformRecord) -> np.ndarray:
    if record.kind == KIND_CLEAN:
        return src.copy()
    return rotate_translate(src, record.angle_deg, record.dx, record.dy)


def assign_transforms(n: int, policy: AugmentPolicy) -> list[TransformRecord]:
    """Deterministically assign a transform to each of n sample slots.

    Exactly floor(n * frac_rotate_only) slots get rotate-only and
    floor(n * frac_rotate_translate) get rotate+translate (exact quotas,
    not per-sample coin flips); the rest stay clean. Placement and all
    angle/shift draws come from a single PCG64 stream seeded by the policy.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    n_rotate = floor_scaled(n, policy.frac_rotate_only)
    n_rotate_translate = floor_scaled(n, policy.frac_rotate_translate)

    rng = np.random.default_rng(policy.seed)
    kinds = np.array([0] * n_rotate + [1] * n_rotate_translate
                     + [2] * (n - n_rotate - n_rotate_translate), dtype=np.int8)
    rng.shuffle(kinds)

    a = policy.max_angle_deg
    s = policy.max_shift_px
    records = []
    for kind in kinds:
        if kind == 0:
            records.append(TransformRecord(KIND_ROTATE, angle_deg=float(rng.uniform(-a, a))))
        elif kind == 1:
            records.append(TransformRecord(
                KIND_ROTATE_TRANSLATE,
                angle_deg=float(rng.uniform(-a, a)),
                dx=int(rng.integers(-s, s + 1)),
                dy=int(rng.integers(-s, s + 1)),
            ))
        else:
            records.append(TransformRecord(KIND_CLEAN))
    return records


def is_overflow(raster: np.ndarray, border_width: int = DEFAULT_OVERFLOW_BORDER,
                ink_threshold: int = DEFAULT_OVERFLOW_THRESHOLD) -> bool:
    """True when any pixel within border_width of an edge reaches ink_threshold."""
    if border_width < 1:
        raise ValueError("border_width must be >= 1")
    if not 0 <= ink_threshold <= 255:
        raise ValueError("ink_threshold must be in 0..255")
    b = border_width
    border = np.concatenate([
        raster[:b, :].ravel(), raster[-b:, :].ravel(),
        raster[b:-b, :b].ravel(), raster[b:-b, -b:].ravel(),
    ])
    return bool((border >= ink_threshold).any())
