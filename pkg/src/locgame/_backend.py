"""Backend selection for the hot kernels.

``LOCGAME_BACKEND=numpy`` forces the pure-numpy path; ``numba`` (the default
when numba imports) compiles the loop kernels with ``@njit``.
"""
import os

_requested = os.environ.get("LOCGAME_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"LOCGAME_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

BACKEND = "numba" if (_requested == "numba" and HAS_NUMBA) else "numpy"

JIT_OPTIONS = {"nogil": True, "cache": True}


def njit(func):
    """``numba.njit`` with the package options; identity when numba is absent."""
    if not HAS_NUMBA:
        return func
    from numba import njit as _njit

    return _njit(**JIT_OPTIONS)(func)
