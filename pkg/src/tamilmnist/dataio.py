"""Dataset persistence and assembly: MNIST IDX files, generation manifests,
stratified splitting, and normalization of external handwritten images.
"""

from __future__ import annotations

import gzip
import hashlib
import json
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from . import augment
from .augment import AugmentPolicy, apply_transform, assign_transforms, is_overflow
from .errors import (
    BadMagicError,
    CountMismatchError,
    EmptyClassError,
    NoUsableFontsError,
    TooSmallError,
    TruncatedFileError,
)
from .fontrender import CANVAS, DEFAULT_INK_HEIGHT, FontEntry, glyph_coverage, render_glyph
from .glyphs import DEFAULT_CLASS_SCALES, VOWEL_CLASSES, GlyphClass, resolve_class
from .numutil import floor_scaled

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801

TRAIN_IMAGES = "train-images-idx3-ubyte"
TRAIN_LABELS = "train-labels-idx1-ubyte"
TEST_IMAGES = "t10k-images-idx3-ubyte"
TEST_LABELS = "t10k-labels-idx1-ubyte"
MANIFEST_NAME = "manifest.json"
SUMMARY_NAME = "summary.json"

FORMAT_VERSION = 1


@dataclass
class Dataset:
    """Ordered labeled rasters plus the parameters that produced them."""

    images: np.ndarray  # (n, 28, 28) uint8
    labels: np.ndarray  # (n,) uint8
    classes: tuple[GlyphClass, ...] = VOWEL_CLASSES
    manifest: dict = field(default_factory=dict)
    provenance: list[dict] | None = None

    def __post_init__(self) -> None:
        self.images = np.asarray(self.images, dtype=np.uint8)
        self.labels = np.asarray(self.labels, dtype=np.uint8)
        if self.images.ndim != 3 or self.images.shape[1:] != (CANVAS, CANVAS):
            raise ValueError(f"images must be (n, {CANVAS}, {CANVAS}), got {self.images.shape}")
        if self.labels.shape != (self.images.shape[0],):
            raise ValueError("labels must be one per image")
        if self.labels.size and self.labels.max() >= len(self.classes):
            raise ValueError("label out of range for class list")

    def __len__(self) -> int:
        return self.images.shape[0]

    def subset(self, idx: np.ndarray) -> "Dataset":
        prov = [self.provenance[i] for i in idx] if self.provenance is not None else None
        return Dataset(self.images[idx], self.labels[idx], self.classes,
                       dict(self.manifest), prov)


# --- IDX files ---------------------------------------------------------------

def _open_read(path: str | Path):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rb")
    return path.open("rb")


def _read_exact(fh, n: int, path, what: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise TruncatedFileError(f"{path}: expected {n} bytes of {what}, got {len(data)}")
    return data


def write_idx(ds: Dataset, images_path: str | Path, labels_path: str | Path) -> None:
    """Write images/labels in the MNIST IDX layout (big-endian headers)."""
    if len(ds) == 0:
        raise ValueError("refusing to write an empty dataset")
    n = len(ds)
    with Path(images_path).open("wb") as fh:
        fh.write(struct.pack(">IIII", IMAGES_MAGIC, n, CANVAS, CANVAS))
        fh.write(ds.images.tobytes())
    with Path(labels_path).open("wb") as fh:
        fh.write(struct.pack(">II", LABELS_MAGIC, n))
        fh.write(ds.labels.astype(np.uint8).tobytes())


def _check_magic(fh, expected: int, path, what: str) -> None:
    (magic,) = struct.unpack(">I", _read_exact(fh, 4, path, "magic"))
    if magic != expected:
        raise BadMagicError(f"{path}: {what} magic 0x{magic:08x}, expected 0x{expected:08x}")


def read_idx(images_path: str | Path, labels_path: str | Path) -> Dataset:
    """Read an IDX image/label pair; transparently accepts .gz files."""
    with _open_read(images_path) as fh:
        _check_magic(fh, IMAGES_MAGIC, images_path, "image")
        n, rows, cols = struct.unpack(">III", _read_exact(fh, 12, images_path, "header"))
        if (rows, cols) != (CANVAS, CANVAS):
            raise BadMagicError(f"{images_path}: expected {CANVAS}x{CANVAS} images, got {rows}x{cols}")
        raw = _read_exact(fh, n * rows * cols, images_path, "pixel data")
        images = np.frombuffer(raw, dtype=np.uint8).reshape(n, rows, cols)
    with _open_read(labels_path) as fh:
        _check_magic(fh, LABELS_MAGIC, labels_path, "label")
        (n_labels,) = struct.unpack(">I", _read_exact(fh, 4, labels_path, "header"))
        labels = np.frombuffer(_read_exact(fh, n_labels, labels_path, "labels"), dtype=np.uint8)
    if n != n_labels:
        raise CountMismatchError(f"{n} images but {n_labels} labels")
    return Dataset(images.copy(), labels.copy())


# --- manifests ---------------------------------------------------------------

def save_manifest(manifest: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
                          encoding="utf-8")


def load_manifest(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


# --- splitting ---------------------------------------------------------------

def split(ds: Dataset, train_fraction: float = 0.75, seed: int = 0) -> tuple[Dataset, Dataset]:
    """Stratified split: per class, floor(m * train_fraction) samples go to
    train after a seeded within-class shuffle. Halves preserve source order.
    """
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must be in (0, 1)")
    rng = np.random.default_rng(seed)
    train_idx: list[np.ndarray] = []
    test_idx: list[np.ndarray] = []
    for cls in ds.classes:
        members = np.flatnonzero(ds.labels == cls.index)
        if members.size == 0:
            raise EmptyClassError(f"class {cls.name} has no samples")
        order = rng.permutation(members.size)
        n_train = floor_scaled(members.size, train_fraction)
        train_idx.append(members[order[:n_train]])
        test_idx.append(members[order[n_train:]])
    train = np.sort(np.concatenate(train_idx))
    test = np.sort(np.concatenate(test_idx))
    return ds.subset(train), ds.subset(test)


# --- handwritten input -------------------------------------------------------

def normalize_handwritten(img: np.ndarray, invert: bool) -> np.ndarray:
    """Normalize an external grayscale image to an MNIST-style raster:
    optional polarity inversion (ink becomes bright), area-average downscale
    to 28x28, then a min-max contrast stretch (skipped on constant images).
    """
    img = np.asarray(img)
    if img.ndim != 2:
        raise ValueError(f"expected a 2-D grayscale image, got shape {img.shape}")
    h, w = img.shape
    if h < CANVAS or w < CANVAS:
        raise TooSmallError(f"image is {h}x{w}; need at least {CANVAS}x{CANVAS}")
    pix = img.astype(np.float64)
    if invert:
        pix = 255.0 - pix
    small = _area_weights(h) @ pix @ _area_weights(w).T
    lo, hi = small.min(), small.max()
    if hi - lo > 1e-6:  # tolerate weight-matrix float wobble on constant input
        small = (small - lo) * (255.0 / (hi - lo))
    return np.clip(np.floor(small + 0.5), 0, 255).astype(np.uint8)


def _area_weights(n_src: int) -> np.ndarray:
    """(28, n_src) matrix averaging source pixels over each output band."""
    band = n_src / CANVAS
    weights = np.zeros((CANVAS, n_src))
    for i in range(CANVAS):
        lo, hi = i * band, (i + 1) * band
        for h in range(int(np.floor(lo)), min(int(np.ceil(hi)), n_src)):
            overlap = min(hi, h + 1) - max(lo, h)
            if overlap > 0:
                weights[i, h] = overlap / band
    return weights


def load_image(path: str | Path) -> np.ndarray:
    """Load a PNG/PGM image file as a 2-D uint8 grayscale array."""
    with Image.open(path) as im:
        return np.asarray(im.convert("L"))


def load_handwritten_dir(dir_path: str | Path, invert: bool = True) -> Dataset:
    """Load every PNG/PGM in a directory as a normalized labeled dataset.

    Labels come from a sidecar `labels.txt` (lines of `<filename> <token>`)
    when present, otherwise from the leading token of each file name. Tokens
    may be a class index, a short name (a, aa, i, ...), or the letter itself.
    """
    dir_path = Path(dir_path)
    files = sorted(p for p in dir_path.iterdir() if p.suffix.lower() in (".png", ".pgm"))
    if not files:
        raise FileNotFoundError(f"no .png/.pgm files in {dir_path}")
    sidecar = {}
    labels_file = dir_path / "labels.txt"
    if labels_file.is_file():
        for line in labels_file.read_text(encoding="utf-8").splitlines():
            parts = line.split()
            if len(parts) >= 2:
                sidecar[parts[0]] = parts[1]
    images, labels, provenance = [], [], []
    for path in files:
        token = sidecar.get(path.name) or path.stem.replace("-", "_").split("_")[0]
        cls = resolve_class(token)
        if cls is None:
            raise ValueError(f"cannot resolve label token {token!r} for {path.name}")
        images.append(normalize_handwritten(load_image(path), invert=invert))
        labels.append(cls.index)
        provenance.append({"file": path.name})
    return Dataset(np.stack(images), np.array(labels, dtype=np.uint8),
                   provenance=provenance)


# --- generation --------------------------------------------------------------

def generate_dataset(
    fonts: list[FontEntry],
    classes: tuple[GlyphClass, ...],
    n_total: int,
    policy: AugmentPolicy,
    *,
    target_ink_height: int = DEFAULT_INK_HEIGHT,
    class_scales: dict[int, float] | None = None,
    border_width: int = augment.DEFAULT_OVERFLOW_BORDER,
    ink_threshold: int = augment.DEFAULT_OVERFLOW_THRESHOLD,
    jobs: int = 1,
) -> Dataset:
    """Render, augment and filter a dataset of n_total candidate rasters.

    Base rasters cycle round-robin over (class, font) pairs so classes stay
    near-balanced; each slot gets its assigned transform; rasters whose ink
    reaches the border are then dropped. Fully deterministic given the
    manifest parameters, independent of the jobs count.
    """
    if n_total < len(classes):
        raise ValueError(f"n_total must be >= {len(classes)}")
    scales = dict(DEFAULT_CLASS_SCALES if class_scales is None else class_scales)

    usable, excluded = [], []
    for font in fonts:
        if all(glyph_coverage(font, list(classes))):
            usable.append(font)
        else:
            excluded.append(font.id)
    if not usable:
        raise NoUsableFontsError("no font covers all target classes")

    n_classes, n_fonts = len(classes), len(usable)
    bases = {}
    for fi, font in enumerate(usable):
        for ci, cls in enumerate(classes):
            bases[fi, ci] = render_glyph(font, cls, target_ink_height,
                                         scales.get(cls.codepoint, 1.0))

    records = assign_transforms(n_total, policy)
    out = np.zeros((n_total, CANVAS, CANVAS), dtype=np.uint8)

    def work(lo: int, hi: int) -> None:
        for i in range(lo, hi):
            ci = i % n_classes
            fi = (i // n_classes) % n_fonts
            out[i] = apply_transform(bases[fi, ci], records[i])

    if jobs > 1:
        chunk = max(256, -(-n_total // jobs))
        spans = [(lo, min(lo + chunk, n_total)) for lo in range(0, n_total, chunk)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(lambda span: work(*span), spans))
    else:
        work(0, n_total)

    keep = np.array([not is_overflow(out[i], border_width, ink_threshold)
                     for i in range(n_total)], dtype=bool)
    kept_idx = np.flatnonzero(keep)
    labels = (kept_idx % n_classes).astype(np.uint8)
    provenance = []
    for i in kept_idx:
        rec = records[i]
        provenance.append({
            "font": usable[(i // n_classes) % n_fonts].id,
            "transform": {"kind": rec.kind, "angle_deg": rec.angle_deg,
                          "dx": rec.dx, "dy": rec.dy},
        })

    pre_counts = np.bincount(np.arange(n_total) % n_classes, minlength=n_classes)
    post_counts = np.bincount(labels, minlength=n_classes)
    font_usage = {}
    for i in kept_idx:
        fid = usable[(i // n_classes) % n_fonts].id
        font_usage[fid] = font_usage.get(fid, 0) + 1

    manifest = {
        "format_version": FORMAT_VERSION,
        "params": {
            "n_total": n_total,
            "target_ink_height": target_ink_height,
            "class_scales": {f"U+{cp:04X}": s for cp, s in sorted(scales.items())},
            "classes": [{"index": c.index, "codepoint": f"U+{c.codepoint:04X}", "name": c.name}
                        for c in classes],
            "fonts": [{"id": f.id, "path": str(f.path), "nominal_scale": f.nominal_scale,
                       "sha256": _sha256(f.path)} for f in usable],
            "policy": {
                "frac_rotate_only": policy.frac_rotate_only,
                "frac_rotate_translate": policy.frac_rotate_translate,
                "max_angle_deg": policy.max_angle_deg,
                "max_shift_px": policy.max_shift_px,
                "seed": policy.seed,
                "rng": "pcg64",
            },
            "overflow": {"border_width": border_width, "ink_threshold": ink_threshold},
        },
        "report": {
            "requested": n_total,
            "retained": int(kept_idx.size),
            "retained_fraction": float(kept_idx.size / n_total),
            "excluded_fonts": excluded,
            "per_class_before_filter": pre_counts.tolist(),
            "per_class_after_filter": post_counts.tolist(),
            "per_font_usage": font_usage,
        },
    }
    return Dataset(out[kept_idx], labels, tuple(classes), manifest, provenance)


def generate_from_manifest(manifest: dict) -> Dataset:
    """Regenerate a dataset bit-exactly from its recorded parameters."""
    from .fontrender import load_font

    params = manifest["params"]
    fonts = [load_font(f["path"], f["nominal_scale"]) for f in params["fonts"]]
    classes = tuple(VOWEL_CLASSES[c["index"]] for c in params["classes"])
    pol = params["policy"]
    policy = AugmentPolicy(pol["frac_rotate_only"], pol["frac_rotate_translate"],
                           pol["max_angle_deg"], pol["max_shift_px"], pol["seed"])
    scales = {int(cp[2:], 16): s for cp, s in params["class_scales"].items()}
    return generate_dataset(
        fonts, classes, params["n_total"], policy,
        target_ink_height=params["target_ink_height"], class_scales=scales,
        border_width=params["overflow"]["border_width"],
        ink_threshold=params["overflow"]["ink_threshold"],
    )


def _sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
