import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fontfactory import build_font_dir, build_latin_font, build_tamil_font  # noqa: E402

from tamilmnist.fontrender import load_font, scan_fonts_dir  # noqa: E402


@pytest.fixture(scope="session")
def fonts_dir(tmp_path_factory) -> Path:
    """Six full-coverage synthetic Tamil fonts."""
    return build_font_dir(tmp_path_factory.mktemp("fonts"), n_fonts=6)


@pytest.fixture(scope="session")
def fonts(fonts_dir):
    return scan_fonts_dir(fonts_dir)


@pytest.fixture(scope="session")
def font0(fonts):
    return fonts[0]


@pytest.fixture(scope="session")
def latin_font(tmp_path_factory):
    path = build_latin_font(tmp_path_factory.mktemp("latin") / "latinonly.ttf")
    return load_font(path)


@pytest.fixture(scope="session")
def no_aytham_font(tmp_path_factory):
    """Covers the 12 vowels but has no character-map entry for aytham."""
    from fontfactory import VOWEL_CODEPOINTS

    path = build_tamil_font(tmp_path_factory.mktemp("partial") / "noaytham.ttf",
                            style_seed=3, codepoints=VOWEL_CODEPOINTS)
    return load_font(path)


@pytest.fixture(scope="session")
def blank_aytham_font(tmp_path_factory):
    """Maps aytham in the cmap but to a glyph with no contours."""
    from fontfactory import AYTHAM_CODEPOINT

    path = build_tamil_font(tmp_path_factory.mktemp("blank") / "blankaytham.ttf",
                            style_seed=4, blank={AYTHAM_CODEPOINT})
    return load_font(path)
