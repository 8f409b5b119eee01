"""Kernel backend selection.

The compiled Cython extension is used when it has been built; otherwise the
numpy implementation is used. Set ``HOM_FINGERPRINT_PURE_PYTHON=1`` to force
the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("HOM_FINGERPRINT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass

mc_tally = _impl.mc_tally
mc_outcomes = _impl.mc_outcomes
min_weight = _impl.min_weight

__all__ = ["BACKEND", "mc_tally", "mc_outcomes", "min_weight"]
