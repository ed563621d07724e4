"""Hot simplex kernels.

The compiled extension ``_pivot`` is used when it was built; otherwise the
pure-Python twin ``_pivot_py`` is used.  Set ``FOLDOPT_PURE_PYTHON=1`` to force
the fallback.
"""

from __future__ import annotations

import os

from . import _pivot_py

BACKEND = "python"
pivot = _pivot_py.pivot
eliminate = _pivot_py.eliminate

if not os.environ.get("FOLDOPT_PURE_PYTHON"):
    try:
        from . import _pivot  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        pivot = _pivot.pivot
        eliminate = _pivot.eliminate

__all__ = ["BACKEND", "pivot", "eliminate"]
