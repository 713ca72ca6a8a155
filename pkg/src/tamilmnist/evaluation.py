"""Top-k evaluation, confusion matrices, and report files."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .glyphs import VOWEL_CLASSES
from .nn.model import Model
from .training import predict_proba, to_model_input


@dataclass
class EvalReport:
    n: int
    topk_accuracy: dict[int, float]
    confusion: np.ndarray  # (c, c) counts, rows = true class
    per_sample: list[dict]  # {"true": int, "ranking": [int], "probs": [float]}

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "topk_accuracy": {str(k): v for k, v in self.topk_accuracy.items()},
            "confusion": self.confusion.tolist(),
            "per_sample": self.per_sample,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "EvalReport":
        return cls(n=d["n"],
                   topk_accuracy={int(k): v for k, v in d["topk_accuracy"].items()},
                   confusion=np.asarray(d["confusion"], dtype=np.int64),
                   per_sample=d["per_sample"])


def rank_classes(probs: np.ndarray) -> np.ndarray:
    """Class indices by descending probability; ties broken by lower index."""
    return np.argsort(-probs, axis=1, kind="stable")


def report_from_probs(probs: np.ndarray, labels: np.ndarray,
                      k_list: tuple[int, ...] = (1, 2)) -> EvalReport:
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    n, n_classes = probs.shape
    ranking = rank_classes(probs)
    topk = {}
    for k in k_list:
        hits = (ranking[:, :k] == labels[:, None]).any(axis=1)
        topk[int(k)] = float(hits.mean())
    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(confusion, (labels, ranking[:, 0]), 1)
    per_sample = [{"true": int(labels[i]),
                   "ranking": ranking[i].tolist(),
                   "probs": probs[i, ranking[i]].tolist()} for i in range(n)]
    return EvalReport(n=n, topk_accuracy=topk, confusion=confusion, per_sample=per_sample)


def evaluate_topk(model: Model, images: np.ndarray, labels: np.ndarray,
                  k_list: tuple[int, ...] = (1, 2)) -> EvalReport:
    """Rank classes per sample by model probability and score top-k hits."""
    if len(images) == 0:
        raise ValueError("evaluation set is empty")
    probs = predict_proba(model, to_model_input(images, model.dtype))
    return report_from_probs(probs, labels, k_list)


def write_report(path_base: str | Path, eval_report: EvalReport | None = None,
                 history: list[dict] | None = None, config: dict | None = None,
                 class_names: list[str] | None = None) -> tuple[Path, Path]:
    """Write <base>.txt (human-readable) and <base>.json (machine-readable).

    Any of eval_report / history / config may be omitted.
    """
    base = Path(path_base)
    txt_path = base.with_suffix(".txt")
    json_path = base.with_suffix(".json")
    names = class_names or [c.name for c in VOWEL_CLASSES]

    payload: dict = {"config": config or {}}
    if history is not None:
        payload["history"] = history
    if eval_report is not None:
        payload["evaluation"] = eval_report.to_json_dict()
    json_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    lines: list[str] = []
    if config:
        lines.append("configuration:")
        for key in sorted(config):
            lines.append(f"  {key} = {config[key]}")
        lines.append("")
    if history:
        lines.append("epoch  train_loss  train_acc  val_acc")
        for row in history:
            val = "-" if row.get("val_accuracy") is None else f"{row['val_accuracy']:.4f}"
            lines.append(f"{row['epoch']:5d}  {row['train_loss']:10.4f}"
                         f"  {row['train_accuracy']:9.4f}  {val:>7}")
        lines.append("")
    if eval_report is not None:
        lines.append(f"samples evaluated: {eval_report.n}")
        for k in sorted(eval_report.topk_accuracy):
            lines.append(f"top-{k} accuracy: {eval_report.topk_accuracy[k]:.4f}")
        lines.append("")
        lines.append("confusion matrix (rows = true class, cols = top-1 prediction):")
        header = "        " + " ".join(f"{name:>6}" for name in names)
        lines.append(header)
        for r, row in enumerate(eval_report.confusion):
            lines.append(f"{names[r]:>7} " + " ".join(f"{int(v):6d}" for v in row))
        lines.append("")
        lines.append("per-sample predictions:")
        for i, s in enumerate(eval_report.per_sample):
            true, top = s["true"], s["ranking"][0]
            mark = "correct" if top == true else "INCORRECT"
            second = names[s["ranking"][1]] if len(s["ranking"]) > 1 else "-"
            lines.append(f"  #{i:<4d} true={names[true]:<7} pred={names[top]:<7}"
                         f" second={second:<7} p={s['probs'][0]:.3f}  {mark}")
    txt = "\n".join(lines).rstrip() + "\n"
    txt_path.write_text(txt, encoding="utf-8")
    return txt_path, json_path


def load_report(json_path: str | Path) -> dict:
    """Round-trip reader for the machine-readable report."""
    payload = json.loads(Path(json_path).read_text(encoding="utf-8"))
    if "evaluation" in payload:
        payload["evaluation"] = EvalReport.from_json_dict(payload["evaluation"])
    return payload
