# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled k-means and silhouette kernels.

Mirrors ``_pykernels`` operation for operation; keep the two in step.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, hypot, INFINITY

cnp.import_array()

BACKEND = "compiled"


cdef void _seed(const double[:, ::1] pts, const double[::1] uniforms, int k,
                double[:, ::1] centers, double[::1] d2, unsigned char[::1] chosen) noexcept nogil:
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t i, pick, last
    cdef int c
    cdef double dx, dy, dd, total, target, cum
    pick = <Py_ssize_t>(uniforms[0] * n)
    if pick > n - 1:
        pick = n - 1
    centers[0, 0] = pts[pick, 0]
    centers[0, 1] = pts[pick, 1]
    chosen[pick] = 1
    for i in range(n):
        dx = pts[i, 0] - centers[0, 0]
        dy = pts[i, 1] - centers[0, 1]
        d2[i] = dx * dx + dy * dy
    for c in range(1, k):
        total = 0.0
        for i in range(n):
            total = total + d2[i]
        pick = -1
        if total > 0.0:
            target = uniforms[c] * total
            cum = 0.0
            last = -1
            for i in range(n):
                cum = cum + d2[i]
                if d2[i] > 0.0:
                    last = i
                    if cum > target:
                        pick = i
                        break
            if pick < 0:
                pick = last
        else:
            for i in range(n):
                if not chosen[i]:
                    pick = i
                    break
        centers[c, 0] = pts[pick, 0]
        centers[c, 1] = pts[pick, 1]
        chosen[pick] = 1
        for i in range(n):
            dx = pts[i, 0] - centers[c, 0]
            dy = pts[i, 1] - centers[c, 1]
            dd = dx * dx + dy * dy
            if dd < d2[i]:
                d2[i] = dd


def lloyd(points, uniforms, int k, int max_iter, double eps):
    """One k-means restart: k-means++ seeding then Lloyd iterations.

    Returns ``(labels, centroids, sse, sse_history)``.
    """
    cdef const double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef const double[::1] u = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    centroids_arr = np.empty((k, 2), dtype=np.float64)
    new_arr = np.empty((k, 2), dtype=np.float64)
    labels_arr = np.zeros(n, dtype=np.int64)
    history_arr = np.empty(max_iter, dtype=np.float64)
    cdef double[:, ::1] cen = centroids_arr
    cdef double[:, ::1] new = new_arr
    cdef cnp.int64_t[::1] labels = labels_arr
    cdef double[::1] history = history_arr
    cdef double[::1] dmin = np.empty(n, dtype=np.float64)
    cdef double[::1] sx = np.empty(k, dtype=np.float64)
    cdef double[::1] sy = np.empty(k, dtype=np.float64)
    cdef cnp.int64_t[::1] counts = np.empty(k, dtype=np.int64)
    cdef unsigned char[::1] chosen = np.zeros(n, dtype=np.uint8)
    cdef Py_ssize_t i, j, best_j, far
    cdef int it, iters = 0
    cdef double dx, dy, dd, best, shift, s, far_d
    cdef double[:, ::1] tmp

    with nogil:
        _seed(pts, u, k, cen, dmin, chosen)
        for it in range(max_iter):
            for j in range(k):
                counts[j] = 0
            for i in range(n):
                dx = pts[i, 0] - cen[0, 0]
                dy = pts[i, 1] - cen[0, 1]
                best = dx * dx + dy * dy
                best_j = 0
                for j in range(1, k):
                    dx = pts[i, 0] - cen[j, 0]
                    dy = pts[i, 1] - cen[j, 1]
                    dd = dx * dx + dy * dy
                    if dd < best:
                        best = dd
                        best_j = j
                labels[i] = best_j
                dmin[i] = best
                counts[best_j] += 1
            for j in range(k):
                if counts[j] != 0:
                    continue
                far = 0
                far_d = -2.0
                for i in range(n):
                    if counts[labels[i]] > 1:
                        dd = dmin[i]
                    else:
                        dd = -1.0
                    if dd > far_d:
                        far_d = dd
                        far = i
                counts[labels[far]] -= 1
                labels[far] = j
                counts[j] = 1
                dmin[far] = 0.0
            for j in range(k):
                sx[j] = 0.0
                sy[j] = 0.0
            for i in range(n):
                sx[labels[i]] = sx[labels[i]] + pts[i, 0]
                sy[labels[i]] = sy[labels[i]] + pts[i, 1]
            shift = 0.0
            for j in range(k):
                new[j, 0] = sx[j] / <double>counts[j]
                new[j, 1] = sy[j] / <double>counts[j]
                dx = new[j, 0] - cen[j, 0]
                dy = new[j, 1] - cen[j, 1]
                dd = sqrt(dx * dx + dy * dy)
                if dd > shift:
                    shift = dd
            tmp = cen
            cen = new
            new = tmp
            s = 0.0
            for i in range(n):
                dx = pts[i, 0] - cen[labels[i], 0]
                dy = pts[i, 1] - cen[labels[i], 1]
                s = s + (dx * dx + dy * dy)
            history[it] = s
            iters = it + 1
            if shift <= eps:
                break

    out = np.asarray(cen).copy()
    return labels_arr, out, float(history[iters - 1]), history_arr[:iters].copy()


def silhouette_samples(points, labels_in, int k):
    """Per-point silhouette; b is the minimum mean distance over other clusters."""
    cdef const double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef const cnp.int64_t[::1] labels = np.ascontiguousarray(labels_in, dtype=np.int64)
    cdef Py_ssize_t n = pts.shape[0]
    out_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double[::1] sums = np.empty(k, dtype=np.float64)
    cdef cnp.int64_t[::1] counts = np.zeros(k, dtype=np.int64)
    cdef Py_ssize_t i, m, j, own
    cdef double dx, dy, a, b, mean, denom

    with nogil:
        for i in range(n):
            counts[labels[i]] += 1
        for i in range(n):
            own = labels[i]
            if counts[own] <= 1:
                continue
            for j in range(k):
                sums[j] = 0.0
            for m in range(n):
                dx = pts[m, 0] - pts[i, 0]
                dy = pts[m, 1] - pts[i, 1]
                sums[labels[m]] = sums[labels[m]] + hypot(dx, dy)
            a = sums[own] / <double>(counts[own] - 1)
            b = INFINITY
            for j in range(k):
                if j != own and counts[j] > 0:
                    mean = sums[j] / <double>counts[j]
                    if mean < b:
                        b = mean
            denom = a if a > b else b
            if denom > 0.0:
                out[i] = (b - a) / denom
    return out_arr
