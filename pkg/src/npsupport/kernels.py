"""Select the compiled kernels when available, otherwise the Python ones.

Set ``NPSUPPORT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("NPSUPPORT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]

        _impl = _compiled
        BACKEND = "cython"
    except ImportError:
        pass

subset_connected = _impl.subset_connected
treewidth_dp = _impl.treewidth_dp

__all__ = ["BACKEND", "subset_connected", "treewidth_dp"]
