"""Rasterize single Tamil letters from scalable fonts into 28x28 grayscale.

Output rasters follow the MNIST convention: ink bright (255) on black (0),
glyph scaled so its tight ink bounding box has a requested max dimension and
centered on the canvas center (13.5, 13.5).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from fontTools.ttLib import TTFont
from PIL import Image, ImageDraw, ImageFont

from .errors import (
    DegenerateGlyphError,
    NoGlyphError,
    UnreadableFileError,
    UnsupportedFormatError,
)
from .glyphs import DEFAULT_CLASS_SCALES, GlyphClass
from .numutil import exact_fraction, iround

CANVAS = 28
CANVAS_CENTER = (CANVAS - 1) / 2.0  # 13.5
DEFAULT_INK_HEIGHT = 20

# Font pixel size of the intermediate rendering that gets measured and
# rescaled; large enough that the 28 px targets are always downscales.
_BASE_SIZE = 128
_BASE_MARGIN = 16

FONT_SUFFIXES = (".ttf", ".otf", ".ttc")


@dataclass(frozen=True)
class FontEntry:
    """A loaded font usable by render_glyph. id is the file stem."""

    id: str
    path: Path
    nominal_scale: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.nominal_scale <= 1.0:
            raise ValueError(f"nominal_scale must be in (0, 1], got {self.nominal_scale}")


def load_font(path: str | Path, nominal_scale: float = 1.0) -> FontEntry:
    """Load a TrueType/OpenType font file, validating that it parses.

    Raises UnreadableFileError when the path is missing or unreadable and
    UnsupportedFormatError when the bytes are not a scalable font.
    """
    path = Path(path)
    if not path.is_file():
        raise UnreadableFileError(f"font file not found: {path}")
    try:
        path.open("rb").close()
    except OSError as exc:
        raise UnreadableFileError(f"cannot read font file {path}: {exc}") from exc
    # Both parsers must accept the file: fontTools supplies the character
    # map, FreeType (through PIL) does the rasterization.
    try:
        _cmap(str(path))
        ImageFont.truetype(str(path), 16)
    except UnreadableFileError:
        raise
    except Exception as exc:
        raise UnsupportedFormatError(f"not a parsable font: {path} ({exc})") from exc
    return FontEntry(id=path.stem, path=path, nominal_scale=nominal_scale)


def scan_fonts_dir(
    fonts_dir: str | Path, nominal_scales: dict[str, float] | None = None
) -> list[FontEntry]:
    """Load every font file in a directory, sorted by file name.

    nominal_scales maps font ids (file stems) to per-font size multipliers.
    Unparsable files raise; an empty directory returns an empty list.
    """
    fonts_dir = Path(fonts_dir)
    if not fonts_dir.is_dir():
        raise UnreadableFileError(f"fonts directory not found: {fonts_dir}")
    scales = nominal_scales or {}
    entries = []
    for path in sorted(fonts_dir.iterdir()):
        if path.suffix.lower() in FONT_SUFFIXES:
            entries.append(load_font(path, scales.get(path.stem, 1.0)))
    return entries


@functools.lru_cache(maxsize=64)
def _cmap(path_str: str) -> dict[int, str]:
    font = TTFont(path_str, lazy=True)
    try:
        cmap = font.getBestCmap()
    finally:
        font.close()
    return dict(cmap)


@functools.lru_cache(maxsize=2048)
def _base_ink(path_str: str, codepoint: int) -> np.ndarray | None:
    """Tight grayscale crop of the glyph rendered at _BASE_SIZE px, or None
    when the glyph rasterizes to no ink."""
    face = ImageFont.truetype(path_str, _BASE_SIZE)
    ch = chr(codepoint)
    bbox = face.getbbox(ch)
    if bbox is None or bbox[2] <= bbox[0] or bbox[3] <= bbox[1]:
        return None
    w = bbox[2] - bbox[0] + 2 * _BASE_MARGIN
    h = bbox[3] - bbox[1] + 2 * _BASE_MARGIN
    canvas = Image.new("L", (w, h), 0)
    draw = ImageDraw.Draw(canvas)
    draw.text((_BASE_MARGIN - bbox[0], _BASE_MARGIN - bbox[1]), ch, font=face, fill=255)
    arr = np.asarray(canvas)
    rows = np.flatnonzero(arr.any(axis=1))
    cols = np.flatnonzero(arr.any(axis=0))
    if rows.size == 0:
        return None
    return arr[rows[0] : rows[-1] + 1, cols[0] : cols[-1] + 1].copy()


def glyph_coverage(font: FontEntry, classes: list[GlyphClass]) -> list[bool]:
    """For each class, whether the font maps its codepoint to a non-empty glyph.

    Checks the character map directly (an unmapped codepoint would otherwise
    rasterize as the .notdef box) and that the mapped glyph produces ink.
    """
    cmap = _cmap(str(font.path))
    out = []
    for cls in classes:
        covered = cls.codepoint in cmap
        if covered:
            covered = _base_ink(str(font.path), cls.codepoint) is not None
        out.append(covered)
    return out


def render_glyph(
    font: FontEntry,
    glyph_class: GlyphClass,
    target_ink_height: int = DEFAULT_INK_HEIGHT,
    class_scale: float | None = None,
) -> np.ndarray:
    """Rasterize one letter into a 28x28 uint8 raster, ink-on-black.

    The glyph's tight ink bounding box is scaled (preserving aspect ratio) so
    its larger dimension equals floor(target_ink_height * nominal_scale *
    class_scale), then placed with its center on the canvas center. Ink
    falling outside the canvas is clipped.
    """
    if not 1 <= target_ink_height <= CANVAS:
        raise ValueError(f"target_ink_height must be in 1..{CANVAS}, got {target_ink_height}")
    if class_scale is None:
        class_scale = DEFAULT_CLASS_SCALES.get(glyph_class.codepoint, 1.0)

    cmap = _cmap(str(font.path))
    if glyph_class.codepoint not in cmap:
        raise NoGlyphError(f"font {font.id} has no glyph for {glyph_class.char!r} (U+{glyph_class.codepoint:04X})")
    base = _base_ink(str(font.path), glyph_class.codepoint)
    if base is None:
        raise DegenerateGlyphError(f"glyph {glyph_class.char!r} rasterized empty in font {font.id}")

    target_max = int(target_ink_height * exact_fraction(font.nominal_scale)
                     * exact_fraction(class_scale))
    target_max = max(target_max, 1)
    h0, w0 = base.shape
    if h0 >= w0:
        h1 = target_max
        w1 = max(1, iround(w0 * target_max / h0))
    else:
        w1 = target_max
        h1 = max(1, iround(h0 * target_max / w0))
    scaled = Image.fromarray(base).resize((w1, h1), Image.Resampling.BILINEAR)
    ink = np.asarray(scaled)

    raster = np.zeros((CANVAS, CANVAS), dtype=np.uint8)
    top = iround(CANVAS_CENTER - (h1 - 1) / 2.0)
    left = iround(CANVAS_CENTER - (w1 - 1) / 2.0)
    r0, c0 = max(top, 0), max(left, 0)
    r1, c1 = min(top + h1, CANVAS), min(left + w1, CANVAS)
    if r1 > r0 and c1 > c0:
        raster[r0:r1, c0:c1] = ink[r0 - top : r1 - top, c0 - left : c1 - left]
    if not raster.any():
        raise DegenerateGlyphError(f"glyph {glyph_class.char!r} clipped to empty ink in font {font.id}")
    return raster
