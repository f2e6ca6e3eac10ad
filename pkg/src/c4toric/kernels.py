"""Kernel selection.

The compiled extension is used when it imports; otherwise, or when
``C4TORIC_PURE_PYTHON=1`` is set, the pure-Python versions are used.  Both
expose the same functions and give identical results.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("C4TORIC_PURE_PYTHON") == "1":
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernels

BACKEND: str = _impl.BACKEND
max_weight_matching = _impl.max_weight_matching
min_weight_perfect_matching_dense = _impl.min_weight_perfect_matching_dense

__all__ = ["BACKEND", "max_weight_matching", "min_weight_perfect_matching_dense"]
