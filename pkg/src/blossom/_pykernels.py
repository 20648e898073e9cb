"""Pure numpy kernels, used when the compiled extension is unavailable.

Every floating-point reduction runs in the same sequential order as the
compiled loops in ``_ckernels.pyx`` so both backends agree bit for bit.
Sums go through ``np.bincount``/``np.cumsum`` (sequential), never
``np.sum`` (pairwise).
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def _sq_dists(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    dx = points[:, 0][:, None] - centers[:, 0][None, :]
    dy = points[:, 1][:, None] - centers[:, 1][None, :]
    return dx * dx + dy * dy


def kmeanspp_seed(points: np.ndarray, uniforms: np.ndarray, k: int) -> np.ndarray:
    """k-means++ seeding driven by ``k`` pre-drawn uniforms in [0, 1)."""
    n = points.shape[0]
    chosen = np.zeros(n, dtype=bool)
    first = min(int(uniforms[0] * n), n - 1)
    centers = np.empty((k, 2), dtype=np.float64)
    centers[0] = points[first]
    chosen[first] = True
    d2 = _sq_dists(points, centers[:1])[:, 0]
    for c in range(1, k):
        cum = np.cumsum(d2)
        total = cum[-1]
        if total > 0.0:
            target = uniforms[c] * total
            above = np.flatnonzero((cum > target) & (d2 > 0.0))
            if above.size:
                pick = int(above[0])
            else:
                pick = int(np.flatnonzero(d2 > 0.0)[-1])
        else:
            # every point coincides with a center; take the lowest unused index
            pick = int(np.flatnonzero(~chosen)[0])
        centers[c] = points[pick]
        chosen[pick] = True
        dx = points[:, 0] - centers[c, 0]
        dy = points[:, 1] - centers[c, 1]
        d2 = np.minimum(d2, dx * dx + dy * dy)
    return centers


def _sequential_sum(values: np.ndarray) -> float:
    total = 0.0
    for v in values.tolist():
        total += v
    return total


def lloyd(points, uniforms, k: int, max_iter: int, eps: float):
    """One k-means restart: k-means++ seeding then Lloyd iterations.

    Returns ``(labels, centroids, sse, sse_history)``. ``sse_history`` holds
    the objective after every centroid update.
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    n = points.shape[0]
    centroids = kmeanspp_seed(points, np.asarray(uniforms, dtype=np.float64), k)
    history = []
    labels = np.zeros(n, dtype=np.int64)
    for _ in range(max_iter):
        d2 = _sq_dists(points, centroids)
        labels = np.argmin(d2, axis=1).astype(np.int64)
        dmin = d2[np.arange(n), labels]
        counts = np.bincount(labels, minlength=k)
        for j in range(k):
            if counts[j]:
                continue
            # reseed: farthest point whose cluster can spare it
            donors = counts[labels] > 1
            cand = np.where(donors, dmin, -1.0)
            i = int(np.argmax(cand))
            counts[labels[i]] -= 1
            labels[i] = j
            counts[j] = 1
            dmin[i] = 0.0
        sx = np.bincount(labels, weights=points[:, 0], minlength=k)
        sy = np.bincount(labels, weights=points[:, 1], minlength=k)
        new = np.empty_like(centroids)
        new[:, 0] = sx / counts
        new[:, 1] = sy / counts
        mx = new[:, 0] - centroids[:, 0]
        my = new[:, 1] - centroids[:, 1]
        shift = float(np.max(np.sqrt(mx * mx + my * my)))
        centroids = new
        ex = points[:, 0] - centroids[labels, 0]
        ey = points[:, 1] - centroids[labels, 1]
        history.append(_sequential_sum(ex * ex + ey * ey))
        if shift <= eps:
            break
    return labels, centroids, history[-1], np.asarray(history, dtype=np.float64)


def silhouette_samples(points, labels, k: int) -> np.ndarray:
    """Per-point silhouette; b is the minimum mean distance over other clusters."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    n = points.shape[0]
    counts = np.bincount(labels, minlength=k)
    out = np.zeros(n, dtype=np.float64)
    x = points[:, 0]
    y = points[:, 1]
    for i in range(n):
        own = labels[i]
        if counts[own] <= 1:
            continue
        # hypot: no underflow for tiny separations; numpy and libm agree exactly
        dist = np.hypot(x - x[i], y - y[i])
        sums = np.bincount(labels, weights=dist, minlength=k)
        a = sums[own] / (counts[own] - 1)
        b = np.inf
        for j in range(k):
            if j != own and counts[j] > 0:
                mean = sums[j] / counts[j]
                if mean < b:
                    b = mean
        denom = max(a, b)
        if denom > 0.0:
            out[i] = (b - a) / denom
    return out
