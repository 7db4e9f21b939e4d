"""Backend selection for the damped-Newton idempotent search.

The search is the one hot loop that is not already inside LAPACK: many
independent Newton runs on tiny complex systems, where per-call numpy
overhead dominates. A Cython kernel is used when compiled; otherwise a
pure-numpy implementation with the same contract takes over. Set
``SIDECOMP_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _newton_py

__all__ = ["BACKEND", "newton_search", "get_backend", "available_backends"]

if os.environ.get("SIDECOMP_PURE_PYTHON") == "1":
    _impl = _newton_py
    BACKEND = "python"
else:
    try:
        from . import _newton as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _newton_py
        BACKEND = "python"

newton_search = _impl.newton_search


def available_backends() -> list[str]:
    names = ["python"]
    try:
        from . import _newton  # noqa: F401

        names.insert(0, "cython")
    except ImportError:
        pass
    return names


def get_backend(name: str):
    """Fetch a specific backend's ``newton_search`` (for benchmarks/tests)."""
    if name == "python":
        return _newton_py.newton_search
    if name == "cython":
        from . import _newton

        return _newton.newton_search
    raise ValueError(f"unknown backend {name!r}")
