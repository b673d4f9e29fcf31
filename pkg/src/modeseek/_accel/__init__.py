"""Backend selection for the hot loops.

The compiled numba kernels are used unless numba is missing or the
environment variable ``MODESEEK_DISABLE_NUMBA`` is set to a truthy value, in
which case the numpy twins take over.  Both expose identical functions.
"""
import os

from . import numpy_kernels
from .common import (  # noqa: F401
    COMPENSATED_MIN_N,
    CONVERGED,
    CUSTOM,
    DEGENERATE,
    EPANECHNIKOV,
    GAUSSIAN,
    MAX_ITERATIONS,
)

DISABLE_ENV = "MODESEEK_DISABLE_NUMBA"


def numba_requested():
    return os.environ.get(DISABLE_ENV, "").strip().lower() not in {"1", "true", "yes", "on"}


kernels = numpy_kernels
BACKEND = "numpy"
if numba_requested():
    try:
        from . import numba_kernels
    except ImportError:
        numba_kernels = None
    else:
        kernels = numba_kernels
        BACKEND = "numba"
