"""Per-frame flower-cluster processing and overlay rendering."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence
from xml.sax.saxutils import escape

from .annotation_io import DEFAULT_NAMES, FrameAnnotations
from .clustering import KmeansConfig, assign_cluster_ids, cluster_centroids, select_k
from .errors import BlossomError, FrameError
from .geometry import Point2, box_centroid

CATEGORY_COLORS = {"unopened": "#ff8c00", "opened": "#8b0000"}
FALLBACK_COLORS = ("#1f77b4", "#2ca02c", "#9467bd", "#17becf", "#bcbd22")


@dataclass(frozen=True)
class PipelineConfig:
    k_max: int = 20
    k1_threshold: float = 0.0
    # category indices to keep; None keeps all
    category_filter: frozenset[int] | None = None
    kmeans: KmeansConfig = field(default_factory=KmeansConfig)
    max_items_warning: int | None = None
    names: tuple[str, ...] = DEFAULT_NAMES

    def __post_init__(self):
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        if self.max_items_warning is not None and self.max_items_warning < 1:
            raise ValueError("max_items_warning must be >= 1")
        if self.category_filter is not None:
            object.__setattr__(self, "category_filter", frozenset(self.category_filter))


@dataclass(frozen=True)
class ClusterRecord:
    id: int
    centroid: Point2
    member_indices: tuple[int, ...]
    category_counts: dict[str, int]
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class FrameClusterReport:
    frame_id: str
    chosen_k: int
    clusters: tuple[ClusterRecord, ...]
    sweep_scores: dict[int, float]
    detection_count: int = 0

    def labels(self) -> dict[int, int]:
        """Cluster id of every kept detection index."""
        return {i: c.id for c in self.clusters for i in c.member_indices}


def process_frame(frame: FrameAnnotations, config: PipelineConfig = PipelineConfig()) -> FrameClusterReport:
    keep = [i for i, d in enumerate(frame.detections)
            if config.category_filter is None or d.category.index in config.category_filter]
    if not keep:
        return FrameClusterReport(frame.frame_id, 0, (), {}, len(frame.detections))
    points = [box_centroid(frame.detections[i].box) for i in keep]
    selection = select_k(points, config.k_max, config.kmeans, config.k1_threshold)
    labels = selection.assignment.labels
    centroids = cluster_centroids(points, labels)
    ids = assign_cluster_ids(centroids)

    names = list(config.names)
    for i in keep:
        name = frame.detections[i].category.name
        if name not in names:
            names.append(name)
    records = []
    for j in sorted(range(len(centroids)), key=ids.__getitem__):
        members = tuple(keep[p] for p, lab in enumerate(labels) if lab == j)
        counts = {n: 0 for n in names}
        for i in members:
            counts[frame.detections[i].category.name] += 1
        warnings = ()
        m = config.max_items_warning
        if m is not None and len(members) > m:
            warnings = (f"cluster has {len(members)} members, more than max items {m}",)
        records.append(ClusterRecord(ids[j], centroids[j], members, counts, warnings))
    return FrameClusterReport(frame.frame_id, selection.chosen_k, tuple(records),
                              dict(selection.mean_silhouette_by_k), len(frame.detections))


def _process(frame: FrameAnnotations, config: PipelineConfig) -> FrameClusterReport:
    try:
        return process_frame(frame, config)
    except (BlossomError, ValueError) as err:
        raise FrameError(frame.frame_id, err) from err


def run_sequence(frames: Sequence[FrameAnnotations], config: PipelineConfig = PipelineConfig(),
                 jobs: int = 1) -> list[FrameClusterReport]:
    """Process frames independently; output order always equals input order."""
    if jobs <= 1 or len(frames) <= 1:
        return [_process(f, config) for f in frames]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda f: _process(f, config), frames))


def _px(v: float) -> str:
    text = f"{v:.2f}"
    return "0.00" if text == "-0.00" else text


def render_overlay(frame: FrameAnnotations, report: FrameClusterReport | None,
                   width: int = 640, height: int = 640) -> str:
    """SVG of detection boxes (clipped to the canvas), a "+" per cluster centroid and its id."""
    if width <= 0 or height <= 0:
        raise ValueError("canvas dimensions must be positive")
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<title>{escape(frame.frame_id)}</title>',
        f'<rect class="background" x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    for i, det in enumerate(frame.detections):
        x0, y0, x1, y1 = det.box.extents
        x0, x1 = max(0.0, x0) * width, min(1.0, x1) * width
        y0, y1 = max(0.0, y0) * height, min(1.0, y1) * height
        name = det.category.name
        color = CATEGORY_COLORS.get(name, FALLBACK_COLORS[det.category.index % len(FALLBACK_COLORS)])
        out.append(
            f'<rect class="detection {escape(name)}" data-index="{i}" x="{_px(x0)}" y="{_px(y0)}" '
            f'width="{_px(x1 - x0)}" height="{_px(y1 - y0)}" fill="none" stroke="{color}" stroke-width="2"/>')
    arm = max(4.0, 0.015 * min(width, height))
    for c in (report.clusters if report else ()):
        cx, cy = c.centroid.x * width, c.centroid.y * height
        out.append(
            f'<path class="centroid" data-cluster="{c.id}" d="M {_px(cx - arm)} {_px(cy)} H {_px(cx + arm)} '
            f'M {_px(cx)} {_px(cy - arm)} V {_px(cy + arm)}" stroke="#0050ff" stroke-width="2"/>')
        out.append(
            f'<text class="cluster-id" x="{_px(cx + arm + 2)}" y="{_px(cy - arm - 2)}" '
            f'font-family="sans-serif" font-size="12" fill="#0050ff">{c.id}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
