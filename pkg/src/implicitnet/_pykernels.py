"""Numpy implementations of the history sums, used when the extension is absent."""

from __future__ import annotations

import numpy as np


def gl_weights(alpha: float, count: int) -> np.ndarray:
    w = np.empty(count, dtype=np.float64)
    if count == 0:
        return w
    w[0] = 1.0
    if count > 1:
        j = np.arange(1, count, dtype=np.float64)
        w[1:] = np.cumprod(1.0 - (alpha + 1.0) / j)
    return w


def causal_convolve(u: np.ndarray, w: np.ndarray) -> np.ndarray:
    n = len(u)
    return np.convolve(u, w[:n])[:n]


def l1_history(u: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = len(u)
    out = np.zeros(n)
    if n > 1:
        du = np.diff(u)
        out[1:] = np.convolve(du, b[: n - 1])[: n - 1]
    return out


def toeplitz_march(w: np.ndarray, f: np.ndarray) -> np.ndarray:
    n = len(f)
    u = np.empty(n)
    w0 = w[0]
    rev = w[1:n][::-1].copy()
    for k in range(n):
        # rev[n-1-k:] holds w[k], ..., w[1] lined up against u[0], ..., u[k-1]
        u[k] = (f[k] - rev[n - 1 - k :] @ u[:k]) / w0
    return u
