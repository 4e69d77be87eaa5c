"""History-sum kernels behind the time-domain solvers.

The compiled extension ``_ckernels`` is used when it was built; otherwise the
numpy versions in ``_pykernels`` are loaded.  Both expose the same four
functions:

``gl_weights(alpha, count)``
    signed binomial weights ``(-1)^j C(alpha, j)``.
``causal_convolve(u, w)``
    ``out[k] = sum_{j<=k} w[j] u[k-j]``.
``l1_history(u, b)``
    ``out[k] = sum_{j<k} b[j] (u[k-j] - u[k-j-1])``, ``out[0] = 0``.
``toeplitz_march(w, f)``
    solves the lower-triangular Toeplitz system ``sum_{j<=k} w[j] u[k-j] = f[k]``.
"""

from __future__ import annotations

import numpy as np

from . import _pykernels

try:
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:  # extension not built
    _impl = _pykernels
    BACKEND = "python"

__all__ = ["BACKEND", "gl_weights", "causal_convolve", "l1_history", "toeplitz_march", "backend"]


def backend(name: str | None = None):
    """Return the kernel module for ``name`` (``"cython"``, ``"python"`` or the active one)."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


def _f64(x) -> np.ndarray:
    return np.ascontiguousarray(x, dtype=np.float64)


def gl_weights(alpha: float, count: int) -> np.ndarray:
    if count < 1:
        raise ValueError("count must be >= 1")
    return _impl.gl_weights(float(alpha), int(count))


def causal_convolve(u, w) -> np.ndarray:
    u, w = _f64(u), _f64(w)
    if len(w) < len(u):
        raise ValueError("need at least as many weights as samples")
    return _impl.causal_convolve(u, w)


def l1_history(u, b) -> np.ndarray:
    u, b = _f64(u), _f64(b)
    if len(b) < len(u) - 1:
        raise ValueError("need len(b) >= len(u) - 1")
    return _impl.l1_history(u, b)


def toeplitz_march(w, f) -> np.ndarray:
    w, f = _f64(w), _f64(f)
    if len(w) < len(f):
        raise ValueError("need at least as many weights as samples")
    if w[0] == 0.0:
        raise ZeroDivisionError("leading weight is zero")
    return _impl.toeplitz_march(w, f)
