"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
NumPy fallback in ``_pykernels``.  Setting ``BOHRLAB_PURE_PYTHON=1`` forces the
fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if not os.environ.get("BOHRLAB_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

coeff_norms = _impl.coeff_norms
matpoly_norms = _impl.matpoly_norms
power_sums = _impl.power_sums


def backends() -> dict:
    """All importable backends by name, for benchmarks and cross-checks."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
