"""Time-domain responses from rest.

Explicit operators are marched with Grunwald-Letnikov sums; implicit
operators are inverted numerically from their Laplace image on a fixed
Talbot contour.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .errors import BranchFailure, EvaluationError, InvalidOrder, SingularStep, ZeroOperator
from .frequency import quad_root, quad_roots
from .networks import QuadraticImplicitOp
from .operators import FracPoly

__all__ = [
    "TimeSeries",
    "gl_weights",
    "gl_apply",
    "caputo_derivative",
    "simulate_explicit",
    "talbot_contour",
    "ilt_point",
    "step_response_implicit",
    "write_series_csv",
]

DEFAULT_NODES = 32


@dataclass(frozen=True)
class TimeSeries:
    """Samples ``values[k] = u(k*h)`` starting at ``t = 0``."""

    h: float
    values: np.ndarray

    def __post_init__(self) -> None:
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ValueError(f"step must be positive, got {self.h!r}")
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or len(vals) == 0:
            raise ValueError("values must be a non-empty 1-D sequence")
        object.__setattr__(self, "values", vals)

    @property
    def t0(self) -> float:
        return 0.0

    @property
    def t(self) -> np.ndarray:
        return self.h * np.arange(len(self.values))

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def sample(cls, fn: Callable[[np.ndarray], np.ndarray], h: float, tmax: float) -> TimeSeries:
        n = int(round(tmax / h)) + 1
        return cls(h, fn(h * np.arange(n)))

    @classmethod
    def step(cls, h: float, tmax: float, amplitude: float = 1.0) -> TimeSeries:
        n = int(round(tmax / h)) + 1
        return cls(h, np.full(n, float(amplitude)))


def gl_weights(alpha: float, count: int) -> np.ndarray:
    """``(-1)^j binom(alpha, j)`` for ``j < count``."""
    return kernels.gl_weights(alpha, count)


def gl_apply(ts: TimeSeries, alpha: float) -> TimeSeries:
    """Grunwald-Letnikov ``D^alpha`` of a sampled signal (an integral when ``alpha < 0``)."""
    if alpha == 0:
        return TimeSeries(ts.h, ts.values.copy())
    w = gl_weights(alpha, len(ts))
    return TimeSeries(ts.h, ts.h ** (-alpha) * kernels.causal_convolve(ts.values, w))


def caputo_derivative(ts: TimeSeries, alpha: float) -> TimeSeries:
    """Caputo derivative of order ``0 < alpha < 1`` by the L1 product rule.

    The kernel is normalised by ``Gamma(1 - alpha)`` so that ``alpha -> 1``
    recovers the first derivative; ``u`` is taken piecewise linear.
    """
    if not 0 < alpha < 1:
        raise InvalidOrder(f"Caputo order must lie in (0, 1), got {alpha!r}")
    n = len(ts)
    j = np.arange(max(n - 1, 1), dtype=np.float64)
    b = (j + 1) ** (1 - alpha) - j ** (1 - alpha)
    scale = ts.h ** (-alpha) / math.gamma(2 - alpha)
    return TimeSeries(ts.h, scale * kernels.l1_history(ts.values, b))


def simulate_explicit(Lop: FracPoly, forcing: TimeSeries) -> TimeSeries:
    """Solve ``Lop(u) = forcing`` from rest with one GL sum per term.

    The combined weights ``W_j = sum_i c_i h^-a_i w_j(a_i)`` turn every step
    into ``W_0 u_k = f_k - sum_{j>=1} W_j u_{k-j}``.
    """
    if not Lop:
        raise ZeroOperator("cannot simulate the zero operator")
    h, n = forcing.h, len(forcing)
    W = np.zeros(n)
    mag = 0.0
    for coeff, exponent in Lop.terms:
        scaled = coeff * h ** (-exponent)
        mag += abs(scaled)
        W += scaled * gl_weights(exponent, n)
    if abs(W[0]) <= 1e-14 * mag:
        raise SingularStep(f"instantaneous coefficient vanishes for h={h!r}")
    return TimeSeries(h, kernels.toeplitz_march(W, forcing.values))


def talbot_contour(t: float, nodes: int = DEFAULT_NODES) -> tuple[float, np.ndarray, np.ndarray]:
    """Fixed-Talbot abscissa ``r``, upper-half nodes ``s_k`` and their ``sigma_k``."""
    if not t > 0:
        raise ValueError(f"Talbot inversion needs t > 0, got {t!r}")
    if nodes < 16:
        raise ValueError("need at least 16 nodes")
    r = 2.0 * nodes / (5.0 * t)
    theta = np.arange(1, nodes) * math.pi / nodes
    cot = 1.0 / np.tan(theta)
    s = r * theta * (cot + 1j)
    sigma = theta + (theta * cot - 1.0) * cot
    return r, s, sigma


def _talbot_sum(t: float, r: float, f_r: complex, s: np.ndarray, sigma: np.ndarray, f_s: np.ndarray) -> float:
    nodes = len(s) + 1
    terms = np.exp(t * s) * f_s * (1.0 + 1j * sigma)
    return float(r / nodes * (0.5 * (f_r * math.exp(r * t)).real + np.sum(terms.real)))


def ilt_point(F: Callable[[complex], complex], t: float, nodes: int = DEFAULT_NODES) -> float:
    """Inverse Laplace transform of ``F`` at ``t`` by the fixed Talbot rule."""
    r, s, sigma = talbot_contour(t, nodes)
    try:
        f_r = complex(F(complex(r)))
        f_s = np.array([complex(F(complex(z))) for z in s])
    except (ArithmeticError, ValueError) as exc:
        raise EvaluationError(f"transform evaluation failed: {exc}") from exc
    return _talbot_sum(t, r, f_r, s, sigma, f_s)


def _tracked_roots(eq: QuadraticImplicitOp, r: float, theta: np.ndarray, substeps: int) -> tuple[complex, np.ndarray]:
    """Passive root at ``s = r`` continued along the Talbot contour.

    The max-real-part rule only identifies the physical root in the right
    half-plane; on the rest of the contour the root is followed by continuity.
    """
    z0, ok = quad_root(eq, complex(r))
    if not ok:
        raise BranchFailure(f"no passive root at s={r!r}")
    out = np.empty(len(theta), dtype=complex)
    prev, prev_theta = z0, 0.0
    for i, th in enumerate(theta):
        for u in np.linspace(prev_theta, th, substeps + 1)[1:]:
            s = r * u * (1.0 / math.tan(u) + 1j)
            r1, r2 = quad_roots(eq, s)
            prev = r1 if abs(r1 - prev) <= abs(r2 - prev) else r2
        out[i] = prev
        prev_theta = th
    return z0, out


def step_response_implicit(
    eq: QuadraticImplicitOp,
    tmax: float,
    points: int,
    nodes: int = DEFAULT_NODES,
    substeps: int = 8,
) -> TimeSeries:
    """Flow ``u(t)`` driven by a unit potential step through the implicit operator.

    ``u = ILT[1 / (s Z(s))]`` with ``Z`` the passive root; ``u(0) = 0``.
    """
    if not tmax > 0 or points < 2:
        raise ValueError("need tmax > 0 and points >= 2")
    h = tmax / (points - 1)
    values = np.zeros(points)
    for k in range(1, points):
        t = k * h
        r, s, sigma = talbot_contour(t, nodes)
        theta = np.arange(1, nodes) * math.pi / nodes
        z_r, z_s = _tracked_roots(eq, r, theta, substeps)
        if z_r == 0 or np.any(z_s == 0):
            raise EvaluationError("equivalent operator vanishes on the contour")
        values[k] = _talbot_sum(t, r, 1.0 / (r * z_r), s, sigma, 1.0 / (s * z_s))
    return TimeSeries(h, values)


def _g(x: float) -> str:
    return format(float(x) + 0.0, ".17g")


def write_series_csv(ts: TimeSeries, out: io.TextIOBase) -> None:
    out.write("t,u\n")
    for t, u in zip(ts.t, ts.values):
        out.write(f"{_g(t)},{_g(u)}\n")
