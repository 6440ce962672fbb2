"""Kernel backend selection.

The compiled extension is used when it imports; set
``MULTIVEC_PURE_PYTHON=1`` to force the numpy fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if os.environ.get("MULTIVEC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

price = _impl.price
devex_update = _impl.devex_update
ratio_test = _impl.ratio_test
ftran_etas = _impl.ftran_etas
btran_etas = _impl.btran_etas
pam_swap = _impl.pam_swap
lu_ftran = _impl.lu_ftran
lu_btran = _impl.lu_btran
singleton_pivots = _impl.singleton_pivots
tri_lower = _impl.tri_lower
tri_upper = _impl.tri_upper
tri_lower_t = _impl.tri_lower_t
tri_upper_t = _impl.tri_upper_t


def backend_module(name: str):
    """Return the kernel module for ``name`` ('python' or 'cython')."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels  # type: ignore[attr-defined]

        return _kernels
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends() -> list[str]:
    out = ["python"]
    try:
        from . import _kernels  # noqa: F401  # type: ignore[attr-defined]
    except ImportError:
        return out
    return out + ["cython"]
