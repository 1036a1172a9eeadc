"""Hot-loop kernels: compiled extension when available, NumPy otherwise.

Set the environment variable HDLAB_PURE_PYTHON to any non-empty value before
import to force the NumPy fallback. The chosen backend is reported in
BACKEND ("cython" or "python").
"""

import os

import numpy as np

from . import _cd_py

if os.environ.get("HDLAB_PURE_PYTHON"):
    _impl = _cd_py
    BACKEND = "python"
else:
    try:
        from . import _cd_cy as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _cd_py
        BACKEND = "python"


def cd_weighted_l1(X, y, weights, beta, tol, max_iter):
    """Weighted-L1 coordinate descent; beta is modified in place.

    X must be float64 and Fortran-ordered (column access is the hot path).
    Returns (iterations, converged).
    """
    if not (isinstance(X, np.ndarray) and X.flags.f_contiguous and X.dtype == np.float64):
        raise ValueError("X must be a Fortran-ordered float64 array")
    return _impl.cd_weighted_l1(X, y, weights, beta, tol, max_iter)
