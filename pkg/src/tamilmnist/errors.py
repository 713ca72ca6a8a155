"""Exception types shared across the package."""


class TamilMnistError(Exception):
    """Base class for all package-specific errors."""


# --- font loading / rendering ---------------------------------------------

class UnreadableFileError(TamilMnistError):
    """Font file missing or not readable."""


class UnsupportedFormatError(TamilMnistError):
    """File exists but is not a parsable scalable font."""


class NoGlyphError(TamilMnistError):
    """Font has no glyph for the requested codepoint."""


class DegenerateGlyphError(TamilMnistError):
    """Glyph rasterized to empty ink."""


class NoUsableFontsError(TamilMnistError):
    """No font in the registry covers the target classes."""


# --- dataset files ----------------------------------------------------------

class BadMagicError(TamilMnistError):
    """IDX file does not start with the expected magic number."""


class CountMismatchError(TamilMnistError):
    """Image and label IDX files disagree on sample count."""


class TruncatedFileError(TamilMnistError):
    """IDX file ends before the declared payload."""


class TooSmallError(TamilMnistError):
    """External image is smaller than 28x28."""


class EmptyClassError(TamilMnistError):
    """Stratified split requested on a dataset with an empty class."""


# --- model / training -------------------------------------------------------

class ShapeMismatchError(TamilMnistError):
    """Tensor shape incompatible with the layer or checkpoint contract."""


class NonFiniteLossError(TamilMnistError):
    """Training loss became NaN or infinite."""
