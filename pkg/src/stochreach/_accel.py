"""JIT switch.

Set ``STOCHREACH_DISABLE_JIT=1`` to run every kernel through its pure-numpy
path. The flag is read once at import time.
"""

import os

_FLAG = os.environ.get("STOCHREACH_DISABLE_JIT", "").strip().lower()
JIT_REQUESTED = _FLAG not in ("1", "true", "yes", "on")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

JIT_ENABLED = JIT_REQUESTED and HAVE_NUMBA


def njit(func=None, **kwargs):
    """``numba.njit`` when numba is importable, identity otherwise.

    Compiled versions are built regardless of the env flag so that tests and
    the benchmark can compare both paths in one process.
    """
    if not HAVE_NUMBA:
        if func is not None:
            return func
        return lambda f: f
    opts = {"cache": False, "nogil": True}
    opts.update(kwargs)
    if func is not None:
        return numba.njit(**opts)(func)
    return numba.njit(**opts)
