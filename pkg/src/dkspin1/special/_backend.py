"""Select the series kernel: compiled extension if built, else NumPy fallback.

Setting ``DKSPIN1_PURE_PYTHON=1`` forces the fallback (used by the benchmark
and by the backend-parity tests).
"""
from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

if _compiled is not None and os.environ.get("DKSPIN1_PURE_PYTHON", "") in ("", "0"):
    kernels = _compiled
    BACKEND = "compiled"
else:
    kernels = _kernels_py
    BACKEND = "python"


def available_backends() -> dict:
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out
