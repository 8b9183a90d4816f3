"""Backend selection for the hot kernels.

The compiled extension ``spinstar._core`` is used when it imports and the
environment variable ``SPINSTAR_PURE_PYTHON`` is unset; otherwise the numpy
implementations in :mod:`spinstar._fallback` take over. ``BACKEND`` names
the active choice.
"""

from __future__ import annotations

import os

import numpy as np

from . import _fallback

try:
    if os.environ.get("SPINSTAR_PURE_PYTHON"):
        raise ImportError("pure-python backend requested")
    from . import _core as _compiled
except ImportError:
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def kernel_threads() -> int:
    return max(1, int(os.environ.get("SPINSTAR_THREADS", "1")))


def _impl(backend: str | None):
    backend = backend or BACKEND
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled backend is not available")
        return _compiled
    if backend == "python":
        return _fallback
    raise ValueError(f"unknown backend {backend!r}")


def uniform_step(times: np.ndarray) -> float | None:
    """Grid spacing if ``times`` is uniform to round-off, else None."""
    if times.size < 2:
        return 0.0 if times.size == 1 else None
    dt = (times[-1] - times[0]) / (times.size - 1)
    ideal = times[0] + dt * np.arange(times.size)
    scale = max(1.0, float(np.max(np.abs(times))))
    if dt > 0 and np.max(np.abs(times - ideal)) <= 1e-12 * scale:
        return float(dt)
    return None


def expsum(freqs, coefs, times, backend: str | None = None) -> np.ndarray:
    """Evaluate ``sum_k coefs[k, :] * exp(-1j * freqs[k] * t)`` at every time.

    Returns an array of shape ``(len(times), coefs.shape[1])``. Uniform grids
    take a phase-recurrence path; anything else is summed directly.
    """
    impl = _impl(backend)
    freqs = np.ascontiguousarray(freqs, dtype=float)
    coefs = np.ascontiguousarray(coefs, dtype=complex)
    times = np.ascontiguousarray(times, dtype=float)
    cview = coefs.view(np.float64).reshape(coefs.shape[0], 2 * coefs.shape[1])
    dt = uniform_step(times)
    if dt is not None and times.size > 1:
        return impl.expsum_uniform(freqs, cview, float(times[0]), dt, times.size,
                                   threads=kernel_threads())
    return impl.expsum_direct(freqs, cview, times, threads=kernel_threads())


def conditional_entropy_grid(rho, thetas, phis, backend: str | None = None) -> np.ndarray:
    impl = _impl(backend)
    rho = np.asarray(rho, dtype=complex)
    return impl.conditional_entropy_grid(
        np.ascontiguousarray(rho.real), np.ascontiguousarray(rho.imag),
        np.ascontiguousarray(thetas, dtype=float), np.ascontiguousarray(phis, dtype=float),
        threads=kernel_threads())
