"""Seeded synthetic orchard frames with known cluster structure.

Coordinates are rounded to six decimals on creation so scenes survive a
trip through label files unchanged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .annotation_io import (DEFAULT_NAMES, BoundingBox, Category, Detection,
                            FrameAnnotations)
from .errors import InfeasibleSpec
from .geometry import Point2

CENTER_LOW, CENTER_HIGH = 0.1, 0.9
PLACEMENT_BUDGET = 10_000
UNOPENED, OPENED = Category(0, DEFAULT_NAMES[0]), Category(1, DEFAULT_NAMES[1])


@dataclass(frozen=True)
class SceneSpec:
    cluster_count: int
    members_per_cluster: tuple[int, int]
    intra_spread: float
    min_separation: float
    box_size: tuple[float, float] = (0.03, 0.03)
    opened_fraction: float = 0.1
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.members_per_cluster
        if self.cluster_count < 1:
            raise ValueError("cluster_count must be >= 1")
        if not 1 <= lo <= hi:
            raise ValueError(f"members_per_cluster {self.members_per_cluster} is not a range of positive counts")
        if self.intra_spread < 0:
            raise ValueError("intra_spread must be >= 0")
        if not self.min_separation > 0:
            raise ValueError("min_separation must be > 0")
        if not all(0 < s <= 1 for s in self.box_size):
            raise ValueError("box_size entries must lie in (0, 1]")
        if not 0 <= self.opened_fraction <= 1:
            raise ValueError("opened_fraction must lie in [0, 1]")

    @property
    def well_separated(self) -> bool:
        return self.min_separation > 4 * self.intra_spread


@dataclass(frozen=True)
class SyntheticScene:
    frame: FrameAnnotations
    true_labels: tuple[int, ...]
    true_centers: tuple[Point2, ...]


def _q(v: float) -> float:
    return round(float(v), 6)


def _clamp(v: float) -> float:
    return min(1.0, max(0.0, v))


def generate_scene(spec: SceneSpec, frame_id: str = "scene") -> SyntheticScene:
    rng = np.random.default_rng(spec.seed)
    centers: list[Point2] = []
    draws = 0
    while len(centers) < spec.cluster_count:
        if draws >= PLACEMENT_BUDGET:
            raise InfeasibleSpec(
                f"placed {len(centers)} of {spec.cluster_count} centers at separation "
                f"{spec.min_separation} within {PLACEMENT_BUDGET} draws")
        draws += 1
        x, y = rng.uniform(CENTER_LOW, CENTER_HIGH, size=2)
        c = Point2(_q(x), _q(y))
        if all(math.dist(c, o) >= spec.min_separation for o in centers):
            centers.append(c)

    lo, hi = spec.members_per_cluster
    members = []
    for label, c in enumerate(centers):
        for _ in range(int(rng.integers(lo, hi + 1))):
            dx, dy = rng.normal(0.0, spec.intra_spread, size=2) if spec.intra_spread > 0 else (0.0, 0.0)
            opened = rng.random() < spec.opened_fraction
            members.append((label, _q(_clamp(c.x + dx)), _q(_clamp(c.y + dy)), opened))
    order = rng.permutation(len(members))
    w, h = spec.box_size
    detections, labels = [], []
    for i in order:
        label, x, y, opened = members[i]
        detections.append(Detection(OPENED if opened else UNOPENED, BoundingBox(x, y, w, h)))
        labels.append(label)
    return SyntheticScene(FrameAnnotations(frame_id, tuple(detections)), tuple(labels), tuple(centers))


def perturb_detections(scene: SyntheticScene, jitter: float = 0.0, drop_rate: float = 0.0,
                       spurious_rate: float = 0.0, seed: int = 0) -> FrameAnnotations:
    """Imperfect detector output for a scene.

    Each ground-truth box is dropped with probability ``drop_rate`` or kept
    with a jittered center and a confidence in [0.5, 1.0). Spurious boxes,
    Poisson(spurious_rate * n) of them, land uniformly with confidence in
    [0.1, 0.5).
    """
    for name, rate in (("drop_rate", drop_rate), ("spurious_rate", spurious_rate)):
        if not 0 <= rate < 1:
            raise ValueError(f"{name} must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    out = []
    gt = scene.frame.detections
    for det in gt:
        if rng.random() < drop_rate:
            continue
        dx, dy = rng.normal(0.0, jitter, size=2) if jitter > 0 else (0.0, 0.0)
        conf = _q(rng.uniform(0.5, 1.0))
        box = BoundingBox(_q(_clamp(det.box.cx + dx)), _q(_clamp(det.box.cy + dy)), det.box.w, det.box.h)
        out.append(Detection(det.category, box, conf))
    n_spurious = int(rng.poisson(spurious_rate * len(gt))) if spurious_rate > 0 else 0
    w, h = gt[0].box.w if gt else 0.03, gt[0].box.h if gt else 0.03
    for _ in range(n_spurious):
        x, y = rng.random(2)
        category = OPENED if rng.random() < 0.5 else UNOPENED
        out.append(Detection(category, BoundingBox(_q(x), _q(y), w, h), _q(rng.uniform(0.1, 0.5))))
    return FrameAnnotations(scene.frame.frame_id, tuple(out))


def scene_sidecar(scene: SyntheticScene) -> dict:
    return {
        "frame_id": scene.frame.frame_id,
        "true_centers": [{"x": c.x, "y": c.y} for c in scene.true_centers],
        "true_labels": list(scene.true_labels),
    }
