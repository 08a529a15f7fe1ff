"""Search kernels: the compiled module when importable, else the pure-Python twin.

Set ``PLSLAB_PURE=1`` to force the pure-Python implementation.
"""
from __future__ import annotations

import os

from . import _kernels_py

_impl = _kernels_py
BACKEND = "python"
if os.environ.get("PLSLAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # no compiler at install time
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

domain_size = _kernels_py.domain_size
rejection_sets = _kernels_py.rejection_sets
min_rejections = _impl.min_rejections
reject_vector = _impl.reject_vector


def backends() -> dict:
    """Every importable implementation, keyed by name (for benchmarks and cross-checks)."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        out["cython"] = _compiled
    return out
