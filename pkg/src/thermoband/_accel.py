"""JIT switch for the numerical kernels.

Kernels are written in a numba-compatible subset of numpy. When numba is
available and ``THERMOBAND_DISABLE_JIT`` is unset (or ``0``), they are
compiled with ``numba.njit``; otherwise the very same functions run as
plain numpy code.
"""

import os

_FALSY = {"", "0", "false", "no", "off"}


def jit_requested():
    return os.environ.get("THERMOBAND_DISABLE_JIT", "0").strip().lower() in _FALSY


try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

JIT_ENABLED = numba is not None and jit_requested()


def kernel(fn):
    """Compile ``fn`` with numba when enabled, else return it unchanged."""
    if JIT_ENABLED:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def backend_name():
    return "numba" if JIT_ENABLED else "numpy"
