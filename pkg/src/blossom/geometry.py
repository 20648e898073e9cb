"""Point and box geometry in normalized image coordinates."""
from __future__ import annotations

import math
from typing import NamedTuple

from .annotation_io import BoundingBox


class Point2(NamedTuple):
    x: float
    y: float


def box_centroid(box: BoundingBox) -> Point2:
    # YOLO boxes store their center directly
    return Point2(box.cx, box.cy)


def translate_box(box: BoundingBox, dx: float, dy: float) -> BoundingBox:
    return BoundingBox(box.cx + dx, box.cy + dy, box.w, box.h)


def euclidean_distance(a: Point2, b: Point2) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two axis-aligned boxes.

    Boxes that only touch along an edge have zero overlap.
    """
    ax0, ay0, ax1, ay1 = a.extents
    bx0, by0, bx1, by1 = b.extents
    iw = min(ax1, bx1) - max(ax0, bx0)
    ih = min(ay1, by1) - max(ay0, by0)
    if iw <= 0.0 or ih <= 0.0:
        return 0.0
    inter = iw * ih
    # areas from the same extents as the overlap so iou(a, a) is exactly 1
    union = (ax1 - ax0) * (ay1 - ay0) + (bx1 - bx0) * (by1 - by0) - inter
    if union <= 0.0:
        return 0.0
    return min(1.0, inter / union)
