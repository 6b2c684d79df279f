"""Hot loops of the search: frame-potential sums, overlap tables, gradients.

The compiled ``_direct`` extension is used when it imports; otherwise the
numpy module ``_reference`` takes over. Set ``FIBSIC_KERNELS=python`` to
force the fallback. ``spectral`` holds the optional FFT versions.

Every backend exposes

``frame_sum(psi)``
    sum_{j,k} |S_jk|^2, the direct triple sum (not normalized).
``frame_sum_grad(psi)``
    that sum and its gradient with respect to ``conj(psi)``.
``overlap_table(psi)``
    ``C[j, m] = sum_l conj(psi_l) psi_{l+j} w^(-lm)``.
``excess_grad(psi)``
    frame potential of ``psi/|psi|`` minus 2/(d+1), evaluated as a sum of
    squared overlap residuals, and its gradient.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _reference, spectral

try:
    from . import _direct as _compiled
except ImportError:  # extension not built
    _compiled = None

__all__ = ["BACKEND", "available_backends", "get_kernels"]


def available_backends() -> list[str]:
    names = ["python", "fft"]
    if _compiled is not None:
        names.insert(0, "cython")
    return names


def _default() -> str:
    forced = os.environ.get("FIBSIC_KERNELS", "").strip().lower()
    if forced:
        if forced not in available_backends():
            raise ImportError(f"FIBSIC_KERNELS={forced!r} is not available: {available_backends()}")
        return forced
    return "cython" if _compiled is not None else "python"


BACKEND = _default()


def get_kernels(name: str | None = None, fft: bool = False) -> ModuleType:
    """Kernel module by name; ``fft=True`` overrides to the spectral one."""
    if fft:
        return spectral
    name = BACKEND if name is None else name
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    if name == "python":
        return _reference
    if name == "fft":
        return spectral
    raise ValueError(f"unknown kernel backend {name!r}")
