"""Both kernel backends must agree bit for bit."""
import numpy as np
import pytest

from blossom import _kernels


needs_both = pytest.mark.skipif(len(_kernels.backends()) < 2, reason="compiled kernels not built")


def _cases(count, seed=0):
    rng = np.random.default_rng(seed)
    for t in range(count):
        n = int(rng.integers(1, 40))
        k = int(rng.integers(1, n + 1))
        pts = rng.random((n, 2))
        if t % 4 == 0:
            pts = np.round(pts * 3) / 3  # many duplicate points
        yield pts, rng.random(k), k


@needs_both
def test_lloyd_backends_identical():
    py, c = _kernels.python_backend, _kernels.compiled_backend
    for pts, u, k in _cases(300):
        a = py.lloyd(pts, u, k, 100, 1e-9)
        b = c.lloyd(pts, u, k, 100, 1e-9)
        assert np.array_equal(a[0], b[0])
        assert np.array_equal(a[1], b[1])
        assert a[2] == b[2]
        assert np.array_equal(a[3], b[3])


@needs_both
def test_silhouette_backends_identical():
    py, c = _kernels.python_backend, _kernels.compiled_backend
    rng = np.random.default_rng(1)
    for pts, _, _ in _cases(200, seed=2):
        n = len(pts)
        if n < 2:
            continue
        labels = rng.integers(0, min(n, 4), size=n)
        if len(set(labels.tolist())) < 2:
            continue
        k = int(labels.max()) + 1
        assert np.array_equal(py.silhouette_samples(pts, labels, k), c.silhouette_samples(pts, labels, k))


def test_lloyd_never_leaves_a_cluster_empty(backend):
    for pts, u, k in _cases(200, seed=3):
        labels, centroids, sse, history = backend.lloyd(pts, u, k, 100, 1e-9)
        assert np.bincount(labels, minlength=k).min() >= 1
        assert sse == history[-1]
        for j in range(k):
            assert np.allclose(centroids[j], pts[labels == j].mean(axis=0), atol=1e-12)


def test_all_points_identical(backend):
    pts = np.full((5, 2), 0.5)
    labels, centroids, sse, _ = backend.lloyd(pts, np.array([0.1, 0.5, 0.9]), 3, 100, 1e-9)
    assert sorted(np.bincount(labels, minlength=3)) == [1, 1, 3]
    assert sse == 0.0


def test_active_backend_reported():
    assert _kernels.BACKEND in ("compiled", "python")
