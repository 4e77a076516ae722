"""Kernel selection: compiled extension when importable, pure Python otherwise.

Both kernels follow the same blueprint with identical arithmetic operation
order, so they return bit-identical values.
"""

from __future__ import annotations

import os

from ._prep import TreeArrays
from . import _dp_py

try:
    from . import _dp_cy  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on build environment
    _dp_cy = None

if os.environ.get("MTDIST_PURE_PYTHON"):
    _dp_cy = None

HAVE_COMPILED = _dp_cy is not None


def backend_name() -> str:
    return "compiled" if HAVE_COMPILED else "python"


def distance_arrays(a1: TreeArrays, a2: TreeArrays) -> float:
    if HAVE_COMPILED:
        return _dp_cy.distance_arrays(a1, a2)
    value, _ = _dp_py.distance_arrays(a1, a2)
    return value
