"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python ``_pykernels`` module is loaded.  Setting ``THERMORATE_PURE_PYTHON=1``
forces the fallback (handy for benchmarks and for checking both paths agree).
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("THERMORATE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

ln_gamma = _impl.ln_gamma
digamma = _impl.digamma
sinpi = _impl.sinpi
pfq_sum = _impl.pfq_sum


def available_backends() -> dict:
    """Map backend name to kernel module for every importable backend."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
