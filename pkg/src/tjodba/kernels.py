"""Backend selection for the Bethe-equation kernel.

The compiled extension is used when it imports; setting ``TJODBA_PURE_PYTHON=1``
forces the pure-Python implementation.
"""
import os

from . import _kernels_py

EVEN, ODD, PARALLEL = _kernels_py.EVEN, _kernels_py.ODD, _kernels_py.PARALLEL

if os.environ.get("TJODBA_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

if _compiled is not None:
    bae_system = _compiled.bae_system
    BACKEND = "cython"
else:
    bae_system = _kernels_py.bae_system
    BACKEND = "python"

__all__ = ["bae_system", "BACKEND", "EVEN", "ODD", "PARALLEL"]
