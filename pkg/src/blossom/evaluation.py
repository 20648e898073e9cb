"""Detection scoring against ground truth: IoU matching, precision, recall, AP, mAP."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .annotation_io import Category, Detection, FrameAnnotations
from .errors import EvaluationError, FrameIdMismatch, MissingConfidence, NoCategories
from .geometry import iou


@dataclass(frozen=True)
class ConfusionCounts:
    true_positive: int = 0
    false_positive: int = 0
    false_negative: int = 0

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(self.true_positive + other.true_positive,
                               self.false_positive + other.false_positive,
                               self.false_negative + other.false_negative)


@dataclass(frozen=True)
class PrCurve:
    # (recall, precision, confidence), one per prediction rank
    points: tuple[tuple[float, float, float], ...] = ()


@dataclass(frozen=True)
class CategoryResult:
    ap: float
    counts: ConfusionCounts
    pr_curve: PrCurve


@dataclass(frozen=True)
class EvalReport:
    per_category: dict[Category, CategoryResult]
    map_at_50: float
    precision: float
    recall: float
    iou_threshold: float
    confidence_threshold: float

    @property
    def counts(self) -> ConfusionCounts:
        total = ConfusionCounts()
        for result in self.per_category.values():
            total = total + result.counts
        return total


@dataclass(frozen=True)
class MatchResult:
    """``matched_gt[p]`` is the ground-truth index claimed by prediction ``p``, or None."""
    matched_gt: tuple[int | None, ...]
    unmatched_gt: frozenset[int]

    @property
    def counts(self) -> ConfusionCounts:
        tp = sum(m is not None for m in self.matched_gt)
        return ConfusionCounts(tp, len(self.matched_gt) - tp, len(self.unmatched_gt))


def _confidence(det: Detection) -> float:
    if det.confidence is None:
        raise MissingConfidence(f"prediction {det} has no confidence")
    return det.confidence


def rank_order(predictions: Sequence[Detection]) -> list[int]:
    """Prediction indices by descending confidence, ties in input order."""
    confs = [_confidence(p) for p in predictions]
    return sorted(range(len(predictions)), key=lambda i: -confs[i])


def match_detections(predictions: Sequence[Detection], ground_truth: Sequence[Detection],
                     iou_threshold: float = 0.5) -> MatchResult:
    matched: list[int | None] = [None] * len(predictions)
    free = set(range(len(ground_truth)))
    for p in rank_order(predictions):
        pred = predictions[p]
        best_gt, best_iou = None, -1.0
        for g in sorted(free):
            gt = ground_truth[g]
            if gt.category.index != pred.category.index:
                continue
            overlap = iou(pred.box, gt.box)
            if overlap > best_iou:
                best_gt, best_iou = g, overlap
        if best_gt is not None and best_iou >= iou_threshold:
            matched[p] = best_gt
            free.discard(best_gt)
    return MatchResult(tuple(matched), frozenset(free))


def precision(counts: ConfusionCounts) -> float:
    denom = counts.true_positive + counts.false_positive
    return 1.0 if denom == 0 else counts.true_positive / denom


def recall(counts: ConfusionCounts) -> float:
    denom = counts.true_positive + counts.false_negative
    return 1.0 if denom == 0 else counts.true_positive / denom


def build_pr_curve(tp_flags: Sequence[bool], confidences: Sequence[float], n_gt: int) -> PrCurve:
    """Cumulative PR points for predictions already in rank order."""
    points = []
    tp = 0
    for rank, (hit, conf) in enumerate(zip(tp_flags, confidences), start=1):
        tp += bool(hit)
        points.append((recall(ConfusionCounts(tp, 0, n_gt - tp)), tp / rank, float(conf)))
    return PrCurve(tuple(points))


def area_under_envelope(curve: PrCurve) -> float:
    """All-point interpolated AP: integrate the monotone precision envelope over recall."""
    if not curve.points:
        return 0.0
    recalls = [0.0] + [r for r, _, _ in curve.points]
    envelope = [p for _, p, _ in curve.points]
    for i in range(len(envelope) - 2, -1, -1):
        envelope[i] = max(envelope[i], envelope[i + 1])
    ap = 0.0
    for i, p in enumerate(envelope):
        ap += (recalls[i + 1] - recalls[i]) * p
    return ap


def _ranked_category(pairs, category_index: int, iou_threshold: float):
    """Match per frame, then rank every prediction of one category globally.

    ``pairs`` yields (predictions, ground_truth) per frame. Returns
    (tp flags in rank order, confidences in rank order, ground-truth count).
    """
    outcomes = []
    n_gt = 0
    order = 0
    for preds, gts in pairs:
        preds = [d for d in preds if d.category.index == category_index]
        gts = [d for d in gts if d.category.index == category_index]
        n_gt += len(gts)
        result = match_detections(preds, gts, iou_threshold)
        for p, det in enumerate(preds):
            outcomes.append((-det.confidence, order, result.matched_gt[p] is not None))
            order += 1
    outcomes.sort(key=lambda t: (t[0], t[1]))
    return [t[2] for t in outcomes], [-t[0] for t in outcomes], n_gt


def average_precision(predictions: Sequence[Detection], ground_truth: Sequence[Detection],
                      category: Category | int, iou_threshold: float = 0.5) -> float:
    index = category.index if isinstance(category, Category) else int(category)
    for p in predictions:
        _confidence(p)
    flags, confs, n_gt = _ranked_category([(predictions, ground_truth)], index, iou_threshold)
    if n_gt == 0 and not flags:
        raise EvaluationError(f"AP undefined for category {index}: no ground truth and no predictions")
    if n_gt == 0:
        return 0.0
    return area_under_envelope(build_pr_curve(flags, confs, n_gt))


def mean_average_precision(per_category_ap: Mapping) -> float:
    values = list(per_category_ap.values())
    if not values:
        raise NoCategories("mAP needs at least one category with a defined AP")
    return sum(values) / len(values)


def evaluate_dataset(pred_frames: Sequence[FrameAnnotations], gt_frames: Sequence[FrameAnnotations],
                     iou_threshold: float = 0.5, confidence_threshold: float = 0.25) -> EvalReport:
    """Score prediction frames against ground-truth frames matched by frame id.

    AP and mAP rank every prediction; the scalar counts, precision and recall
    keep only predictions with confidence >= ``confidence_threshold``.
    """
    gt_by_id: dict[str, FrameAnnotations] = {}
    for frame in gt_frames:
        if frame.frame_id in gt_by_id:
            raise EvaluationError(f"duplicate ground-truth frame id {frame.frame_id!r}")
        gt_by_id[frame.frame_id] = frame
    pred_by_id: dict[str, FrameAnnotations] = {}
    for frame in pred_frames:
        if frame.frame_id not in gt_by_id:
            raise FrameIdMismatch(f"prediction frame {frame.frame_id!r} has no ground truth")
        if frame.frame_id in pred_by_id:
            raise EvaluationError(f"duplicate prediction frame id {frame.frame_id!r}")
        for det in frame.detections:
            if det.confidence is None:
                raise MissingConfidence(f"frame {frame.frame_id!r}: prediction without confidence")
        pred_by_id[frame.frame_id] = frame

    # prediction frames first, in their given order, so rank ties follow input order
    ordered_ids = [f.frame_id for f in pred_frames]
    ordered_ids += [f.frame_id for f in gt_frames if f.frame_id not in pred_by_id]
    pairs = [(pred_by_id[i].detections if i in pred_by_id else (), gt_by_id[i].detections)
             for i in ordered_ids]

    categories: dict[int, Category] = {}
    for preds, gts in pairs:
        for det in (*preds, *gts):
            categories.setdefault(det.category.index, det.category)

    per_category: dict[Category, CategoryResult] = {}
    for index in sorted(categories):
        flags, confs, n_gt = _ranked_category(pairs, index, iou_threshold)
        curve = build_pr_curve(flags, confs, n_gt)
        ap = area_under_envelope(curve) if n_gt else 0.0
        kept = [hit for hit, c in zip(flags, confs) if c >= confidence_threshold]
        tp = sum(kept)
        counts = ConfusionCounts(tp, len(kept) - tp, n_gt - tp)
        per_category[categories[index]] = CategoryResult(ap, counts, curve)

    if not per_category:
        raise NoCategories("no ground truth and no predictions in any frame")
    total = ConfusionCounts()
    for result in per_category.values():
        total = total + result.counts
    return EvalReport(
        per_category=per_category,
        map_at_50=mean_average_precision({c: r.ap for c, r in per_category.items()}),
        precision=precision(total),
        recall=recall(total),
        iou_threshold=iou_threshold,
        confidence_threshold=confidence_threshold,
    )
