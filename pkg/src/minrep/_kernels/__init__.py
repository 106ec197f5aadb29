"""Hot inner loops with a compiled backend and a NumPy fallback.

The compiled extension is used when it imports; set ``MINREP_PURE_PYTHON=1``
to force the fallback.  ``BACKEND`` names the active implementation.
"""
import os

from . import _pykernels as py

if os.environ.get("MINREP_PURE_PYTHON", "") not in ("", "0"):
    _impl = py
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = py
        BACKEND = "python"

laguerre_function_table = _impl.laguerre_function_table
tilde_series = _impl.tilde_series

__all__ = ["BACKEND", "laguerre_function_table", "tilde_series", "py"]
