"""JIT dispatch.

Numerical kernels are decorated with :func:`maybe_njit`.  When numba is
importable and the environment variable ``HEUNSER_DISABLE_JIT`` is unset (or
"0"), this is ``numba.njit``; otherwise it is a no-op decorator and the same
source runs as pure Python/numpy.  The flag is read once at import time.
"""

import os

_DISABLED = os.environ.get("HEUNSER_DISABLE_JIT", "0") not in ("", "0")

if not _DISABLED:
    try:
        from numba import njit as _njit

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        HAVE_NUMBA = False
else:
    HAVE_NUMBA = False


def maybe_njit(*args, **kwargs):
    """``numba.njit`` when enabled, identity decorator otherwise."""
    if HAVE_NUMBA:
        return _njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]

    def wrap(fn):
        return fn

    return wrap
