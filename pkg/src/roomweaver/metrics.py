"""Layout evaluation: category counts, mIoU, validity flags, set reports.

Recall/precision come from per-category box counts; accuracy is scene-level
binary (100 only when every category count matches exactly). mIoU matches
predicted to ground-truth boxes within each category greedily by descending
IoU, each box used at most once; unmatched boxes count as IoU 0 and the
denominator is max(#pred, #gt). Aggregates are plain means over scenes, and
the OOB rate is the percentage of scenes with any out-of-bounds box.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .core import DEFAULT_TOL, Layout, box_iou_3d, boxes_overlap, out_of_bounds


class SceneIdMismatch(Exception):
    def __init__(self, detail: str):
        super().__init__(f"prediction/ground-truth scene ids do not align: {detail}")


@dataclass(frozen=True)
class SceneEval:
    scene_id: str
    recall: float
    precision: float
    accuracy: float  # 0 or 100
    miou: float
    oob: bool
    overlap: bool

    def to_dict(self) -> dict:
        return {
            "scene_id": self.scene_id,
            "recall": self.recall,
            "precision": self.precision,
            "accuracy": self.accuracy,
            "miou": self.miou,
            "oob": self.oob,
            "overlap": self.overlap,
        }


def count_metrics(pred: Layout, gt: Layout) -> tuple[float, float, float]:
    """(recall, precision, accuracy) from per-category box counts, in percent."""
    pred_counts = Counter(b.category for b in pred.boxes)
    gt_counts = Counter(b.category for b in gt.boxes)
    matched = sum(min(pred_counts[c], gt_counts[c]) for c in gt_counts)
    total_gt = sum(gt_counts.values())
    total_pred = sum(pred_counts.values())
    if total_gt == 0:
        recall = 100.0 if total_pred == 0 else 0.0
    else:
        recall = 100.0 * matched / total_gt
    if total_pred == 0:
        precision = 100.0 if total_gt == 0 else 0.0
    else:
        precision = 100.0 * matched / total_pred
    accuracy = 100.0 if pred_counts == gt_counts else 0.0
    return recall, precision, accuracy


def _greedy_match_iou(pred_boxes, gt_boxes) -> float:
    """Sum of matched IoUs: pick the best remaining pair until none overlap."""
    pairs = []
    for i, p in enumerate(pred_boxes):
        for j, g in enumerate(gt_boxes):
            iou = box_iou_3d(p, g)
            if iou > 0:
                pairs.append((iou, i, j))
    pairs.sort(key=lambda t: (-t[0], t[1], t[2]))
    used_p: set[int] = set()
    used_g: set[int] = set()
    total = 0.0
    for iou, i, j in pairs:
        if i in used_p or j in used_g:
            continue
        used_p.add(i)
        used_g.add(j)
        total += iou
    return total


def layout_miou(pred: Layout, gt: Layout) -> float:
    """Mean IoU over per-category greedy matches, in percent."""
    denom = max(len(pred.boxes), len(gt.boxes))
    if denom == 0:
        return 100.0  # two empty layouts agree perfectly
    categories = {b.category for b in pred.boxes} | {b.category for b in gt.boxes}
    total = 0.0
    for category in sorted(categories):
        pred_boxes = [b for b in pred.boxes if b.category == category]
        gt_boxes = [b for b in gt.boxes if b.category == category]
        total += _greedy_match_iou(pred_boxes, gt_boxes)
    return 100.0 * total / denom


def scene_flags(layout: Layout, tol: float = DEFAULT_TOL) -> tuple[bool, bool]:
    """(any box out of bounds, any pair overlapping)."""
    oob = any(out_of_bounds(b, layout.room, tol) for b in layout.boxes)
    overlap = any(
        boxes_overlap(layout.boxes[i], layout.boxes[j], tol)
        for i in range(len(layout.boxes))
        for j in range(i + 1, len(layout.boxes))
    )
    return oob, overlap


@dataclass(frozen=True)
class EvalReport:
    scenes: tuple[SceneEval, ...]

    @property
    def mean_recall(self) -> float:
        return self._mean("recall")

    @property
    def mean_precision(self) -> float:
        return self._mean("precision")

    @property
    def mean_accuracy(self) -> float:
        return self._mean("accuracy")

    @property
    def mean_miou(self) -> float:
        return self._mean("miou")

    @property
    def oob_rate(self) -> float:
        if not self.scenes:
            return 0.0
        return 100.0 * sum(1 for s in self.scenes if s.oob) / len(self.scenes)

    @property
    def overlap_rate(self) -> float:
        if not self.scenes:
            return 0.0
        return 100.0 * sum(1 for s in self.scenes if s.overlap) / len(self.scenes)

    def _mean(self, attr: str) -> float:
        if not self.scenes:
            return 0.0
        return sum(getattr(s, attr) for s in self.scenes) / len(self.scenes)

    def to_dict(self) -> dict:
        return {
            "scenes": [s.to_dict() for s in self.scenes],
            "means": {
                "oob_rate": self.oob_rate,
                "overlap_rate": self.overlap_rate,
                "recall": self.mean_recall,
                "precision": self.mean_precision,
                "accuracy": self.mean_accuracy,
                "miou": self.mean_miou,
            },
        }

    def render_table(self) -> str:
        """Aligned plain-text summary with the usual column set."""
        header = f"{'OOB':>8} {'rec.':>8} {'prec.':>8} {'acc.':>8} {'mIoU':>8}"
        row = (
            f"{self.oob_rate:8.2f} {self.mean_recall:8.2f} {self.mean_precision:8.2f} "
            f"{self.mean_accuracy:8.2f} {self.mean_miou:8.2f}"
        )
        return f"{header}\n{row}"


def evaluate_scene(scene_id: str, pred: Layout, gt: Layout, tol: float = DEFAULT_TOL) -> SceneEval:
    recall, precision, accuracy = count_metrics(pred, gt)
    oob, overlap = scene_flags(pred, tol)
    return SceneEval(
        scene_id=scene_id,
        recall=recall,
        precision=precision,
        accuracy=accuracy,
        miou=layout_miou(pred, gt),
        oob=oob,
        overlap=overlap,
    )


def evaluate_set(
    preds: list[tuple[str, Layout]],
    gts: list[tuple[str, Layout]],
    tol: float = DEFAULT_TOL,
) -> EvalReport:
    """Evaluate aligned (scene_id, layout) collections into one report."""
    pred_map = dict(preds)
    gt_map = dict(gts)
    if len(pred_map) != len(preds) or len(gt_map) != len(gts):
        raise SceneIdMismatch("duplicate scene ids")
    if set(pred_map) != set(gt_map):
        missing = sorted(set(gt_map) - set(pred_map))
        extra = sorted(set(pred_map) - set(gt_map))
        raise SceneIdMismatch(f"missing={missing[:5]} extra={extra[:5]}")
    scenes = tuple(
        evaluate_scene(sid, pred_map[sid], gt_map[sid], tol) for sid in sorted(gt_map)
    )
    return EvalReport(scenes)
