"""Kernel backend selection.

The compiled extension is used when importable; setting the environment
variable ``ARTIFACT_PURE_PYTHON=1`` forces the numpy fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "numpy"
expsum = _kernels_py.expsum
su2_mckean = _kernels_py.su2_mckean

if os.environ.get("ARTIFACT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        pass
    else:
        expsum = _ckernels.expsum
        su2_mckean = _ckernels.su2_mckean
        BACKEND = "cython"

__all__ = ["BACKEND", "expsum", "su2_mckean"]
