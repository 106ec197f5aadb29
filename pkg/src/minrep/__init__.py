"""Schrodinger-model machinery for minimal representations.

Subpackages follow the computational pieces: :mod:`specfun` (special
functions), :mod:`radial_symbolic` (exact sl2 algebra), :mod:`spectral`
(Laguerre eigenbases and holomorphic semigroups), :mod:`inversion`,
:mod:`bargmann`, :mod:`fourth_order`, :mod:`cones`, :mod:`catalog` and the
command line in :mod:`cli`.
"""
from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
