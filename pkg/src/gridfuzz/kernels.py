"""Backend selection for the sampled-set kernels.

The compiled extension is used when it was built; otherwise the numpy
fallback is loaded. Set ``GRIDFUZZ_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("GRIDFUZZ_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND
grid = _impl.grid
sample_trapezoid = _impl.sample_trapezoid
aggregate_clipped = _impl.aggregate_clipped
mom = _impl.mom
bounding = _impl.bounding


def available_backends() -> dict:
    """Map backend name to module for every importable implementation."""
    found = {"python": _kernels_py}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
