"""The 13-class Tamil label space: 12 vowels plus the aytham letter.

Class indices are fixed: vowels in Unicode order (U+0B85..U+0B94) at
indices 0..11, aytham (U+0B83) at index 12.
"""

from __future__ import annotations

from dataclasses import dataclass

TAMIL_BLOCK = range(0x0B80, 0x0C00)


@dataclass(frozen=True)
class GlyphClass:
    """One target letter: its class index, Unicode codepoint and a short name."""

    index: int
    codepoint: int
    name: str

    @property
    def char(self) -> str:
        return chr(self.codepoint)


VOWEL_CLASSES: tuple[GlyphClass, ...] = (
    GlyphClass(0, 0x0B85, "a"),        # அ
    GlyphClass(1, 0x0B86, "aa"),       # ஆ
    GlyphClass(2, 0x0B87, "i"),        # இ
    GlyphClass(3, 0x0B88, "ii"),       # ஈ
    GlyphClass(4, 0x0B89, "u"),        # உ
    GlyphClass(5, 0x0B8A, "uu"),       # ஊ
    GlyphClass(6, 0x0B8E, "e"),        # எ
    GlyphClass(7, 0x0B8F, "ee"),       # ஏ
    GlyphClass(8, 0x0B90, "ai"),       # ஐ
    GlyphClass(9, 0x0B92, "o"),        # ஒ
    GlyphClass(10, 0x0B93, "oo"),      # ஓ
    GlyphClass(11, 0x0B94, "au"),      # ஔ
    GlyphClass(12, 0x0B83, "aytham"),  # ஃ
)

NUM_CLASSES = len(VOWEL_CLASSES)

# Letters whose wide forms tend to spill past the 28 px square; rendered smaller.
DEFAULT_CLASS_SCALES: dict[int, float] = {0x0B94: 0.85, 0x0B83: 0.85}

_BY_NAME = {c.name: c for c in VOWEL_CLASSES}
_BY_CHAR = {c.char: c for c in VOWEL_CLASSES}
_BY_INDEX = {c.index: c for c in VOWEL_CLASSES}


def class_by_name(name: str) -> GlyphClass:
    return _BY_NAME[name]


def class_by_index(index: int) -> GlyphClass:
    return _BY_INDEX[index]


def resolve_class(token: str) -> GlyphClass | None:
    """Map a label token (index digit-string, short name, or the letter itself)
    to its class; None when the token matches nothing."""
    token = token.strip()
    if token in _BY_CHAR:
        return _BY_CHAR[token]
    if token.lower() in _BY_NAME:
        return _BY_NAME[token.lower()]
    if token.isdigit() and int(token) in _BY_INDEX:
        return _BY_INDEX[int(token)]
    return None
