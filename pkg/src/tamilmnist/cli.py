"""Command-line entry point.

Subcommands: generate (render/augment/split/write IDX), train, eval, infer,
inspect. Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric
failure. All randomness is controlled by --seed flags (default 0, never
wall-clock); every run echoes its resolved configuration into its outputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .augment import (
    DEFAULT_FRAC_ROTATE,
    DEFAULT_FRAC_ROTATE_TRANSLATE,
    DEFAULT_MAX_ANGLE_DEG,
    DEFAULT_MAX_SHIFT_PX,
    DEFAULT_OVERFLOW_BORDER,
    DEFAULT_OVERFLOW_THRESHOLD,
    AugmentPolicy,
)
from .dataio import (
    MANIFEST_NAME,
    SUMMARY_NAME,
    TEST_IMAGES,
    TEST_LABELS,
    TRAIN_IMAGES,
    TRAIN_LABELS,
    Dataset,
    generate_dataset,
    load_handwritten_dir,
    load_image,
    normalize_handwritten,
    read_idx,
    save_manifest,
    split,
    write_idx,
)
from .errors import NonFiniteLossError, TamilMnistError
from .estimator import GlyphClassifier
from .evaluation import evaluate_topk, write_report
from .fontrender import DEFAULT_INK_HEIGHT, scan_fonts_dir
from .glyphs import VOWEL_CLASSES, resolve_class
from .training import to_model_input

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

ASCII_LEVELS = " .:-=+*#%@"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _config_echo(args: argparse.Namespace) -> dict:
    skip = {"func"}
    return {k: (str(v) if isinstance(v, Path) else v)
            for k, v in sorted(vars(args).items()) if k not in skip}


def _load_registry(fonts_dir: Path) -> tuple[dict, dict]:
    """Optional fonts-dir/registry.json: per-font nominal_scale overrides and
    per-class render scales."""
    registry = fonts_dir / "registry.json"
    if not registry.is_file():
        return {}, {}
    data = json.loads(registry.read_text(encoding="utf-8"))
    nominal = {str(k): float(v) for k, v in data.get("nominal_scale", {}).items()}
    class_scales = {}
    for token, scale in data.get("class_scales", {}).items():
        cls = resolve_class(str(token))
        if cls is None:
            raise ValueError(f"registry.json: unknown class token {token!r}")
        class_scales[cls.codepoint] = float(scale)
    return nominal, class_scales


def cmd_generate(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    nominal, registry_scales = _load_registry(Path(args.fonts_dir))
    fonts = scan_fonts_dir(args.fonts_dir, nominal)
    if not fonts:
        print(f"no font files in {args.fonts_dir}", file=sys.stderr)
        return EXIT_DATA
    policy = AugmentPolicy(
        frac_rotate_only=args.frac_rotate,
        frac_rotate_translate=args.frac_rotate_translate,
        max_angle_deg=args.max_angle,
        max_shift_px=args.max_shift,
        seed=args.seed,
    )
    ds = generate_dataset(
        fonts, VOWEL_CLASSES, args.count, policy,
        target_ink_height=args.target_ink_height,
        class_scales=registry_scales or None,
        border_width=args.overflow_border,
        ink_threshold=args.overflow_threshold,
        jobs=args.jobs,
    )
    split_seed = args.seed + 1
    train_ds, test_ds = split(ds, args.train_fraction, seed=split_seed)

    write_idx(train_ds, out_dir / TRAIN_IMAGES, out_dir / TRAIN_LABELS)
    write_idx(test_ds, out_dir / TEST_IMAGES, out_dir / TEST_LABELS)

    manifest = dict(ds.manifest)
    manifest["split"] = {"train_fraction": args.train_fraction, "seed": split_seed,
                         "train_count": len(train_ds), "test_count": len(test_ds)}
    manifest["config"] = _config_echo(args)
    save_manifest(manifest, out_dir / MANIFEST_NAME)
    summary = dict(manifest["report"])
    summary["split"] = manifest["split"]
    summary["config"] = manifest["config"]
    save_manifest(summary, out_dir / SUMMARY_NAME)

    r = manifest["report"]
    print(f"generated {r['retained']} of {r['requested']} requested samples "
          f"(retained fraction {r['retained_fraction']:.4f})")
    print(f"train/test split: {len(train_ds)}/{len(test_ds)}")
    print(f"wrote IDX files, {MANIFEST_NAME} and {SUMMARY_NAME} to {out_dir}")
    return EXIT_OK


def cmd_train(args) -> int:
    data_dir = Path(args.data_dir)
    train_ds = read_idx(data_dir / TRAIN_IMAGES, data_dir / TRAIN_LABELS)
    test_ds = read_idx(data_dir / TEST_IMAGES, data_dir / TEST_LABELS)

    est = GlyphClassifier(arch=args.model, epochs=args.epochs, batch_size=args.batch_size,
                          lr=args.lr, seed=args.seed, patience=args.patience, verbose=True)
    print(f"training {args.model} model on {len(train_ds)} samples "
          f"({len(test_ds)} validation)")
    est.fit(to_model_input(train_ds.images), train_ds.labels,
            validation=(to_model_input(test_ds.images), test_ds.labels))
    print(f"parameter count: {est.param_count():,}")

    checkpoint = Path(args.checkpoint)
    checkpoint.parent.mkdir(parents=True, exist_ok=True)
    est.save(checkpoint)
    report_base = Path(args.report) if args.report else checkpoint.with_suffix(".train_report")
    txt, js = write_report(report_base, history=est.history_, config=_config_echo(args))
    final = est.history_[-1]
    print(f"final epoch: loss={final['train_loss']:.4f} "
          f"train_acc={final['train_accuracy']:.4f} val_acc={final['val_accuracy']:.4f}")
    print(f"checkpoint: {checkpoint}")
    print(f"report: {txt} / {js}")
    return EXIT_OK


def cmd_eval(args) -> int:
    est = GlyphClassifier.from_checkpoint(args.checkpoint)
    if args.handwritten_dir:
        ds = load_handwritten_dir(args.handwritten_dir, invert=args.invert)
    else:
        data_dir = Path(args.data_dir)
        ds = read_idx(data_dir / TEST_IMAGES, data_dir / TEST_LABELS)
    k_list = tuple(int(k) for k in args.topk.split(","))
    report = evaluate_topk(est.model_, ds.images, ds.labels, k_list)
    report_base = Path(args.report) if args.report else Path(args.checkpoint).with_suffix(".eval_report")
    txt, js = write_report(report_base, eval_report=report, config=_config_echo(args))
    for k in sorted(report.topk_accuracy):
        print(f"top-{k} accuracy: {report.topk_accuracy[k]:.4f} ({report.n} samples)")
    print(f"report: {txt} / {js}")
    return EXIT_OK


def cmd_infer(args) -> int:
    est = GlyphClassifier.from_checkpoint(args.checkpoint)
    raster = normalize_handwritten(load_image(args.image), invert=args.invert)
    probs = est.predict_proba(raster[None])[0]
    order = np.argsort(-probs, kind="stable")
    for rank, idx in enumerate(order, start=1):
        cls = VOWEL_CLASSES[idx] if idx < len(VOWEL_CLASSES) else None
        name = cls.name if cls else str(idx)
        char = cls.char if cls else "?"
        print(f"{rank:2d}. {name:<8} {char}  p={probs[idx]:.4f}")
    return EXIT_OK


def _ascii_art(raster: np.ndarray) -> str:
    idx = (raster.astype(np.int32) * (len(ASCII_LEVELS) - 1) + 127) // 255
    return "\n".join("".join(ASCII_LEVELS[v] for v in row) for row in idx)


def cmd_inspect(args) -> int:
    data_dir = Path(args.data_dir)
    pairs = [("train", data_dir / TRAIN_IMAGES, data_dir / TRAIN_LABELS),
             ("test", data_dir / TEST_IMAGES, data_dir / TEST_LABELS)]
    for split_name, images_path, labels_path in pairs:
        if not images_path.is_file():
            print(f"{split_name}: missing ({images_path})")
            continue
        ds = read_idx(images_path, labels_path)
        hist = np.bincount(ds.labels, minlength=len(VOWEL_CLASSES))
        print(f"{split_name}: {len(ds)} samples, 28x28, "
              f"labels {ds.labels.min()}..{ds.labels.max()}")
        print("  per-class counts: " + " ".join(
            f"{c.name}={hist[c.index]}" for c in VOWEL_CLASSES))
        if args.index is not None and split_name == args.split:
            if not 0 <= args.index < len(ds):
                print(f"index {args.index} out of range", file=sys.stderr)
                return EXIT_DATA
            cls = VOWEL_CLASSES[ds.labels[args.index]]
            print(f"  sample {args.index}: label {cls.index} ({cls.name} {cls.char})")
            print(_ascii_art(ds.images[args.index]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tamilmnist",
                     description="Generate a font-bootstrapped Tamil vowel dataset "
                                 "and train/evaluate classifiers on it.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="render fonts into IDX train/test files")
    p.add_argument("--fonts-dir", required=True, help="directory of .ttf/.otf files")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--count", type=int, default=60000,
                   help="candidate samples before overflow filtering")
    p.add_argument("--target-ink-height", type=int, default=DEFAULT_INK_HEIGHT)
    p.add_argument("--frac-rotate", type=float, default=DEFAULT_FRAC_ROTATE)
    p.add_argument("--frac-rotate-translate", type=float, default=DEFAULT_FRAC_ROTATE_TRANSLATE)
    p.add_argument("--max-angle", type=float, default=DEFAULT_MAX_ANGLE_DEG)
    p.add_argument("--max-shift", type=int, default=DEFAULT_MAX_SHIFT_PX)
    p.add_argument("--overflow-border", type=int, default=DEFAULT_OVERFLOW_BORDER)
    p.add_argument("--overflow-threshold", type=int, default=DEFAULT_OVERFLOW_THRESHOLD)
    p.add_argument("--train-fraction", type=float, default=0.75)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                   help="worker cap; output is identical for any value")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("train", help="train a classifier on generated IDX data")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--model", choices=("fc", "cnn"), default="cnn")
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--batch-size", type=int, default=128)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--patience", type=int, default=None)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--report", default=None, help="report base path (default: beside checkpoint)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a checkpoint on IDX or handwritten data")
    p.add_argument("--checkpoint", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--data-dir")
    group.add_argument("--handwritten-dir")
    p.add_argument("--topk", default="1,2")
    p.add_argument("--invert", action=argparse.BooleanOptionalAction, default=True,
                   help="invert handwritten images (dark-on-light input)")
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("infer", help="rank classes for one image")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--image", required=True)
    p.add_argument("--invert", action=argparse.BooleanOptionalAction, default=True)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("inspect", help="dump IDX headers and preview samples")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--split", choices=("train", "test"), default="train")
    p.add_argument("--index", type=int, default=None, help="sample to preview as ASCII")
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NonFiniteLossError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (TamilMnistError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
