"""tamilmnist: font-bootstrapped, MNIST-compatible Tamil vowel dataset
generation plus from-scratch FC/CNN classifiers."""

__version__ = "0.1.0"

from .augment import AugmentPolicy, TransformRecord, assign_transforms, is_overflow, rotate_translate
from .dataio import (
    Dataset,
    generate_dataset,
    normalize_handwritten,
    read_idx,
    split,
    write_idx,
)
from .estimator import GlyphClassifier
from .evaluation import EvalReport, evaluate_topk, write_report
from .fontrender import FontEntry, glyph_coverage, load_font, render_glyph, scan_fonts_dir
from .glyphs import NUM_CLASSES, VOWEL_CLASSES, GlyphClass
from .nn import build_cnn_model, build_fc_model, init_params, param_count
from .training import TrainConfig, train

__all__ = [
    "AugmentPolicy",
    "Dataset",
    "EvalReport",
    "FontEntry",
    "GlyphClass",
    "GlyphClassifier",
    "NUM_CLASSES",
    "TrainConfig",
    "TransformRecord",
    "VOWEL_CLASSES",
    "assign_transforms",
    "build_cnn_model",
    "build_fc_model",
    "evaluate_topk",
    "generate_dataset",
    "glyph_coverage",
    "init_params",
    "is_overflow",
    "load_font",
    "normalize_handwritten",
    "param_count",
    "read_idx",
    "render_glyph",
    "rotate_translate",
    "scan_fonts_dir",
    "split",
    "train",
    "write_idx",
    "write_report",
]
