"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``KGK_PURE_PYTHON=1`` to force the fallback (useful for benchmarking and
for debugging the kernels against each other).
"""

from __future__ import annotations

import os

from . import _radial_py

if os.environ.get("KGK_PURE_PYTHON"):
    _impl = _radial_py
    BACKEND = "python"
else:
    try:
        from . import _radial_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _radial_py
        BACKEND = "python"

STATUS_OK = _radial_py.STATUS_OK
STATUS_STEP_UNDERFLOW = _radial_py.STATUS_STEP_UNDERFLOW
STATUS_STEP_BUDGET = _radial_py.STATUS_STEP_BUDGET

sweep = _impl.sweep
u_eval = _impl.u_eval


def kernel_backend() -> str:
    """Name of the active integration kernel: "cython" or "python"."""
    return BACKEND
