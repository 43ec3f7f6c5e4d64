"""Numba switch.

Set ``SETWISE_KEMENY_NO_NUMBA=1`` to force the pure-numpy/pure-python kernel
path. Numba is also skipped automatically when it cannot be imported.
"""

import os

_DISABLED = os.environ.get("SETWISE_KEMENY_NO_NUMBA", "").strip().lower() not in (
    "",
    "0",
    "false",
    "no",
)

try:
    if _DISABLED:
        raise ImportError("disabled by SETWISE_KEMENY_NO_NUMBA")
    import numba as _numba

    USE_NUMBA = True
except ImportError:
    _numba = None
    USE_NUMBA = False


def njit(func):
    """Compile ``func`` with numba when enabled, otherwise return it untouched.

    The original python function stays reachable as ``func.py_func`` in both
    modes so tests can run the interpreted path side by side.
    """
    if USE_NUMBA:
        compiled = _numba.njit(cache=True)(func)
        return compiled
    func.py_func = func
    return func


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
