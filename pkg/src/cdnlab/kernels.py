"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy fallback is used. ``CDNLAB_PURE=1`` forces the fallback.
"""
import os

from cdnlab import _kernels_py

if os.environ.get("CDNLAB_PURE"):
    _impl = _kernels_py
else:
    try:
        from cdnlab import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"
TOTAL_COST = _kernels_py.TOTAL_COST
MAX_RADIUS = _kernels_py.MAX_RADIUS

floyd_warshall = _impl.floyd_warshall
coverage_costs = _impl.coverage_costs
best_subset = _impl.best_subset


def backends():
    """Map of available backend name to kernel module."""
    found = {"python": _kernels_py}
    try:
        from cdnlab import _kernels
    except ImportError:
        pass
    else:
        found["compiled"] = _kernels
    return found
