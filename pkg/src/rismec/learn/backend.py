"""Kernel backend selection.

The compiled Cython kernels are preferred when importable; the numpy fallback
is always available. RISMEC_KERNELS=python|cython|auto forces the choice
(auto is the default). Both backends implement the same three functions with
identical semantics, so everything above this module is backend-agnostic.
"""

from __future__ import annotations

import os

_requested = os.environ.get("RISMEC_KERNELS", "auto").lower()

if _requested not in ("auto", "python", "cython"):
    raise ValueError(f"RISMEC_KERNELS must be auto, python, or cython, got {_requested!r}")

if _requested in ("auto", "cython"):
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _requested == "cython":
            raise
        from . import _kernels_py as _impl
else:
    from . import _kernels_py as _impl

BACKEND_NAME: str = _impl.BACKEND_NAME
mlp_forward = _impl.mlp_forward
mlp_backward = _impl.mlp_backward
adam_step = _impl.adam_step


def available_backends() -> list[str]:
    names = ["python"]
    try:
        from . import _kernels_cy  # noqa: F401
        names.append("cython")
    except ImportError:
        pass
    return names


def get_backend(name: str):
    """Return the kernel module for an explicit backend name (for benchmarks)."""
    if name == "python":
        from . import _kernels_py
        return _kernels_py
    if name == "cython":
        from . import _kernels_cy  # type: ignore[attr-defined]
        return _kernels_cy
    raise ValueError(f"unknown backend {name!r}")
