"""Kernel backend selection.

The compiled extension is used when it imports; set ``BLOSSOM_PURE_PYTHON=1``
to force the numpy fallback.
"""
from __future__ import annotations

import os

from . import _pykernels as python_backend

try:
    from . import _ckernels as compiled_backend
except ImportError:
    compiled_backend = None

if compiled_backend is not None and not os.environ.get("BLOSSOM_PURE_PYTHON"):
    active = compiled_backend
else:
    active = python_backend
BACKEND: str = active.BACKEND


def backends() -> dict:
    """Every importable backend by name."""
    found = {"python": python_backend}
    if compiled_backend is not None:
        found["compiled"] = compiled_backend
    return found
