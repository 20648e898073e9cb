"""Flower-to-cluster association.

k-means (Lloyd iterations, k-means++ seeding, seeded restarts), the
silhouette coefficient, silhouette-driven choice of k, and raster-order
cluster identities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import ClusteringError, EmptyInput, InvalidK, SingleCluster
from .geometry import Point2

SCORE_TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class KmeansConfig:
    restarts: int = 10
    max_iterations: int = 100
    convergence_epsilon: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.convergence_epsilon >= 0:
            raise ValueError("convergence_epsilon must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class ClusterAssignment:
    k: int
    labels: tuple[int, ...]
    centroids: tuple[Point2, ...]
    sse: float
    # objective after every Lloyd update, one tuple per restart
    sse_history: tuple[tuple[float, ...], ...] = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class KSelectionResult:
    chosen_k: int
    assignment: ClusterAssignment
    mean_silhouette_by_k: dict[int, float]


def as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ClusteringError(f"points must have shape (n, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ClusteringError("points must be finite")
    return np.ascontiguousarray(arr)


def _as_labels(labels, n: int) -> np.ndarray:
    arr = np.asarray(labels, dtype=np.int64)
    if arr.shape != (n,):
        raise ClusteringError(f"expected {n} labels, got shape {arr.shape}")
    if n and arr.min() < 0:
        raise ClusteringError("labels must be non-negative")
    return arr


def restart_uniforms(seed: int, restart: int, k: int) -> np.ndarray:
    """The k uniforms driving k-means++ seeding for one restart."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, restart]))
    return rng.random(k)


def kmeans(points, k: int, config: KmeansConfig = KmeansConfig(), backend=None) -> ClusterAssignment:
    pts = as_points(points)
    n = pts.shape[0]
    if n == 0:
        raise EmptyInput("kmeans needs at least one point")
    if not 1 <= k <= n:
        raise InvalidK(f"k={k} outside [1, {n}]")
    kern = backend or _kernels.active
    best = None
    histories = []
    for r in range(config.restarts):
        u = restart_uniforms(config.seed, r, k)
        labels, centroids, sse, history = kern.lloyd(
            pts, u, k, config.max_iterations, config.convergence_epsilon)
        histories.append(tuple(history.tolist()))
        # strict: ties keep the lowest restart index
        if best is None or sse < best[2]:
            best = (labels, centroids, sse)
    labels, centroids, sse = best
    return ClusterAssignment(
        k=k,
        labels=tuple(int(v) for v in labels),
        centroids=tuple(Point2(float(x), float(y)) for x, y in centroids),
        sse=float(sse),
        sse_history=tuple(histories),
    )


def silhouette_coefficient(points, labels, i: int) -> float:
    """Silhouette of one point.

    ``a`` is the mean distance to the other members of the point's cluster,
    ``b`` the smallest mean distance to the members of any other cluster.
    A point alone in its cluster scores 0.
    """
    pts = as_points(points)
    lab = _as_labels(labels, pts.shape[0])
    if len(set(lab.tolist())) < 2:
        raise SingleCluster("silhouette needs at least two clusters")
    if not 0 <= i < pts.shape[0]:
        raise IndexError(i)
    own = lab[i]
    dist = np.hypot(pts[:, 0] - pts[i, 0], pts[:, 1] - pts[i, 1])
    same = lab == own
    if same.sum() == 1:
        return 0.0
    a = dist[same].sum() / (same.sum() - 1)
    b = min(dist[lab == c].mean() for c in set(lab.tolist()) if c != own)
    denom = max(a, b)
    return 0.0 if denom == 0 else float((b - a) / denom)


def silhouette_samples(points, labels, backend=None) -> np.ndarray:
    pts = as_points(points)
    lab = _as_labels(labels, pts.shape[0])
    if len(set(lab.tolist())) < 2:
        raise SingleCluster("silhouette needs at least two clusters")
    kern = backend or _kernels.active
    return kern.silhouette_samples(pts, lab, int(lab.max()) + 1)


def mean_silhouette(points, labels, backend=None) -> float:
    return float(np.mean(silhouette_samples(points, labels, backend)))


def select_k(points, k_max: int = 20, config: KmeansConfig = KmeansConfig(),
             k1_threshold: float = 0.0, backend=None) -> KSelectionResult:
    """Pick k by maximal mean silhouette over k = 2..min(k_max, n - 1).

    Falls back to a single cluster when fewer than three points are given or
    when no candidate scores above ``k1_threshold``. Scores within 1e-12 of
    each other count as tied and the smaller k wins.
    """
    pts = as_points(points)
    n = pts.shape[0]
    if n == 0:
        raise EmptyInput("select_k needs at least one point")
    if k_max < 1:
        raise InvalidK(f"k_max={k_max} must be >= 1")
    scores: dict[int, float] = {}
    best_k, best_score, best_assignment = None, -math.inf, None
    for k in range(2, min(k_max, n - 1) + 1):
        assignment = kmeans(pts, k, config, backend)
        score = mean_silhouette(pts, assignment.labels, backend)
        scores[k] = score
        if best_k is None or score > best_score + SCORE_TIE_TOLERANCE:
            best_k, best_score, best_assignment = k, score, assignment
    if best_k is None or best_score <= k1_threshold:
        return KSelectionResult(1, kmeans(pts, 1, config, backend), scores)
    return KSelectionResult(best_k, best_assignment, scores)


def cluster_centroids(points, labels) -> list[Point2]:
    pts = as_points(points)
    lab = _as_labels(labels, pts.shape[0])
    if lab.size == 0:
        return []
    k = int(lab.max()) + 1
    counts = np.bincount(lab, minlength=k)
    if np.any(counts == 0):
        raise ClusteringError("every cluster index below the maximum label needs a member")
    # bincount sums sequentially, matching the kernels' centroid update
    sx = np.bincount(lab, weights=pts[:, 0], minlength=k) / counts
    sy = np.bincount(lab, weights=pts[:, 1], minlength=k) / counts
    return [Point2(float(x), float(y)) for x, y in zip(sx, sy)]


def assign_cluster_ids(centroids: Sequence[Point2]) -> list[int]:
    """Raster-order identities: ascending x, then ascending y, then index.

    Returns ``ids`` where ``ids[j]`` is the identity of cluster ``j``.
    """
    order = sorted(range(len(centroids)), key=lambda j: (centroids[j][0], centroids[j][1], j))
    ids = [0] * len(centroids)
    for rank, j in enumerate(order):
        ids[j] = rank
    return ids
