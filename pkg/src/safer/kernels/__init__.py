"""Batch scans over belief grids.

The compiled extension ``_ckernels`` is used when it was built; otherwise the
numpy implementation in ``_fallback`` is. Set ``SAFER_PURE_PYTHON=1`` to force
the fallback.
"""

import os

from . import _fallback

fallback = _fallback

if os.environ.get("SAFER_PURE_PYTHON") == "1":
    _impl = _fallback
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _fallback

compiled = None if _impl is _fallback else _impl
BACKEND = "compiled" if compiled is not None else "numpy"

first_crossing_failure = _impl.first_crossing_failure
first_violation = _impl.first_violation

__all__ = ["BACKEND", "compiled", "fallback", "first_crossing_failure", "first_violation"]
