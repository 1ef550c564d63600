"""Backend selection for the integration kernels.

The compiled extension is preferred. Set ``LVRES_PURE_PYTHON=1`` to force the
pure-Python implementation (useful for debugging and for the benchmark).
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("LVRES_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

integrate_path = _impl.integrate_path
classify_points = _impl.classify_points

EQUILIBRIUM = _kernels_py.EQUILIBRIUM
MAX_TIME = _kernels_py.MAX_TIME
LEFT_DOMAIN = _kernels_py.LEFT_DOMAIN
STEP_UNDERFLOW = _kernels_py.STEP_UNDERFLOW
HIT_AXIS = _kernels_py.HIT_AXIS
