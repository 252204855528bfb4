"""Kernel backend selection for the pair-tracking recursion.

Two interchangeable engines exist: a numba-compiled kernel (fast path) and a
vectorized pure-numpy fallback.  The ``GMMINFO_BACKEND`` environment variable
pins one globally (``numba`` or ``numpy``); callers can also pass
``backend=...`` per call.  Unset, the default is numba when importable, else
numpy.  ``reference`` selects the dict-based pure-Python tracker, which is
only sensible at small n.
"""

from __future__ import annotations

import os

from .errors import InvalidParameterError

ENV_VAR = "GMMINFO_BACKEND"
_KNOWN = ("numba", "numpy", "reference")


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def available_backends() -> tuple[str, ...]:
    return _KNOWN if numba_available() else ("numpy", "reference")


def resolve_backend(backend: str | None = None) -> str:
    """Explicit argument > environment variable > best available."""
    choice = backend or os.environ.get(ENV_VAR)
    if choice is None:
        return "numba" if numba_available() else "numpy"
    choice = choice.lower()
    if choice not in _KNOWN:
        raise InvalidParameterError(
            f"unknown backend {choice!r}; expected one of {_KNOWN}"
        )
    if choice == "numba" and not numba_available():
        raise InvalidParameterError("numba backend requested but numba is not installed")
    return choice
