"""Frequency-domain evaluation of implicit network operators.

The equivalent operator is evaluated at ``s = i*omega`` by solving the
quadratic pointwise and keeping the passive root.  A finite-depth network
recursion is provided as an independent check of both the derived equation
and the branch choice.
"""

from __future__ import annotations

import cmath
import io
import math
from dataclasses import dataclass
from typing import Callable, Final

import numpy as np

from .errors import (
    BranchFailure,
    DegenerateEquation,
    ImplicitNetError,
    InsufficientSamples,
    NoConvergence,
    NumericBlowup,
)
from .networks import NetworkSpec, QuadraticImplicitOp, derive
from .operators import fp_eval, fp_eval_mp, render

__all__ = [
    "OPEN",
    "FrequencyResponse",
    "quad_roots",
    "quad_root",
    "recursion_map",
    "truncated_response",
    "truncation_errors",
    "fixed_point",
    "bode",
    "fit_order",
    "write_bode_csv",
]


class _Open:
    """Open-circuit termination: nothing is attached past the last generation."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OPEN"


OPEN: Final = _Open()

# relative slack for calling a root with Re ~ -1e-17 passive
PASSIVE_RTOL = 1e-12
BLOWUP = 1e300


def quad_roots(eq: QuadraticImplicitOp, s: complex) -> tuple[complex, complex]:
    """Both roots of ``a2 x^2 + B(s) x + C(s) = 0`` without cancellation."""
    a = eq.a2
    if a == 0:
        raise DegenerateEquation("leading coefficient is zero")
    B = fp_eval(eq.b, s)
    C = fp_eval(eq.c, s)
    r = cmath.sqrt(B * B - 4.0 * a * C)
    if (B.conjugate() * r).real < 0:
        r = -r
    q = -0.5 * (B + r)
    if q == 0:
        return 0j, 0j
    return q / a, C / q


def _is_passive(z: complex) -> bool:
    return z.real >= -PASSIVE_RTOL * abs(z)


def quad_root(eq: QuadraticImplicitOp, s: complex) -> tuple[complex, bool]:
    """Passive root of the equation at ``s`` and whether it really is passive.

    The root with the larger real part is returned.  When both real parts are
    equal (lossless networks on the imaginary axis) the tie is broken by
    nudging ``s`` into the right half-plane, where a positive-real impedance
    has strictly positive real part.
    """
    r1, r2 = quad_roots(eq, s)
    scale = abs(r1) + abs(r2)
    if abs(r1.real - r2.real) <= PASSIVE_RTOL * scale and r1 != r2:
        nudged = complex(s) + 1e-6 * abs(s)
        n1, n2 = quad_roots(eq, nudged)
        lead = n1 if n1.real >= n2.real else n2
        best = r1 if abs(r1 - lead) <= abs(r2 - lead) else r2
    else:
        best = r1 if r1.real >= r2.real else r2
    return best, _is_passive(best)


def _step_and_open(topology: str, m: int, n: int, La, Lb):
    # works for complex and mpmath.mpc alike
    if topology == "tree":

        def step(z):
            return (La + z) * (Lb + z) / (La + Lb + 2 * z)

        return step, La * Lb / (La + Lb)
    if topology == "multitree":

        def step(z):
            return 1 / (m / (La + z) + n / (Lb + z))

        return step, 1 / (m / La + n / Lb)

    def step(z):
        return La + Lb * z / (Lb + z)

    return step, La + Lb


def recursion_map(spec: NetworkSpec, s: complex) -> tuple[Callable[[complex], complex], complex]:
    """One-generation map ``Z_k -> Z_{k+1}`` at ``s`` and its open-circuit first step."""
    return _step_and_open(spec.topology, spec.m, spec.n, fp_eval(spec.La, s), fp_eval(spec.Lb, s))


def _guard(z):
    if not (abs(z) <= BLOWUP):  # also catches nan
        raise NumericBlowup(f"recursion value {z!r} left the representable range")
    return z


def _iterate(step, first_open, depth: int, termination, zero):
    try:
        if termination is OPEN:
            if depth == 0:
                return complex(math.inf, 0.0)
            z = _guard(first_open)
            start = 1
        else:
            z = _guard(zero + termination)
            start = 0
        for _ in range(start, depth):
            z = _guard(step(z))
    except ZeroDivisionError as exc:
        raise NumericBlowup("division by zero in network recursion") from exc
    return z


def truncated_response(
    spec: NetworkSpec, s: complex, depth: int, termination: complex | _Open = 0j
) -> complex:
    """Equivalent operator of the network cut off after ``depth`` generations.

    ``termination`` closes the deepest generation; :data:`OPEN` leaves it
    unconnected, for which depth 0 is an infinite impedance.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    step, first_open = recursion_map(spec, s)
    return _iterate(step, first_open, depth, termination, 0j)


def truncation_errors(
    spec: NetworkSpec,
    s: complex,
    max_depth: int,
    termination: complex | _Open = 0j,
    dps: int | str | None = None,
) -> list[float]:
    """``|Z_depth - L(s)|`` for ``depth = 0 .. max_depth``.

    With ``dps`` the recursion and the passive root are carried in
    :mod:`mpmath` at that many digits, so the column shows the truncation
    error itself rather than the double-precision floor.  ``dps="auto"``
    estimates the contraction rate from the double-precision column and
    picks enough digits that the error at ``max_depth`` is still resolved.
    The branch is always chosen by :func:`quad_root` in double precision.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    eq = derive(spec)
    target, ok = quad_root(eq, s)
    if not ok:
        raise BranchFailure(f"no passive root at s={s!r}")
    step, first_open = recursion_map(spec, s)
    if dps is None or dps == "auto":
        errs = [abs(_iterate(step, first_open, d, termination, 0j) - target) for d in range(max_depth + 1)]
        if dps is None:
            return errs
        dps = _auto_digits(errs, abs(target), max_depth)

    import mpmath

    with mpmath.workdps(dps):
        s_mp = mpmath.mpc(s)
        r1, r2 = _quad_roots_mp(eq, s_mp)
        target = r1 if abs(r1 - target) <= abs(r2 - target) else r2
        La, Lb = fp_eval_mp(spec.La, s_mp), fp_eval_mp(spec.Lb, s_mp)
        step, first_open = _step_and_open(spec.topology, spec.m, spec.n, La, Lb)
        if termination is not OPEN:
            termination = mpmath.mpc(termination)
        zero = mpmath.mpc(0)
        return [float(abs(_iterate(step, first_open, d, termination, zero) - target)) for d in range(max_depth + 1)]


_MIN_DIGITS = 30
_MAX_DIGITS = 4000


def _auto_digits(errs: list[float], scale: float, max_depth: int) -> int:
    # geometric contraction rate over the part of the column above the double floor
    resolved = [(d, e) for d, e in enumerate(errs) if d >= 1 and math.isfinite(e) and e > 1e-12 * scale]
    if len(resolved) >= 2:
        (d0, e0), (d1, e1) = resolved[0], resolved[-1]
        decades = (math.log10(e0) - math.log10(e1)) / (d1 - d0)
    else:
        decades = 12.0  # below the double floor after one generation
    if not decades > 0:
        return _MIN_DIGITS
    return int(min(_MAX_DIGITS, _MIN_DIGITS + math.ceil(decades * max_depth)))


def _quad_roots_mp(eq: QuadraticImplicitOp, s):
    import mpmath

    a = mpmath.mpf(eq.a2)
    B = fp_eval_mp(eq.b, s)
    C = fp_eval_mp(eq.c, s)
    r = mpmath.sqrt(B * B - 4 * a * C)
    if (mpmath.conj(B) * r).real < 0:
        r = -r
    q = -(B + r) / 2
    if q == 0:
        return q, q
    return q / a, C / q


def fixed_point(
    spec: NetworkSpec,
    s: complex,
    tol: float = 1e-13,
    max_iter: int = 10_000,
    start: complex = 0j,
) -> tuple[complex, int]:
    """Iterate the network recursion from ``start`` until it stops moving.

    Returns the last iterate and the number of steps taken.
    """
    if tol <= 0 or max_iter < 1:
        raise ValueError("need tol > 0 and max_iter >= 1")
    step, _ = recursion_map(spec, s)
    z = complex(start)
    for k in range(1, max_iter + 1):
        try:
            z_new = _guard(step(z))
        except ZeroDivisionError as exc:
            raise NumericBlowup("division by zero in network recursion") from exc
        if abs(z_new - z) <= tol * max(1.0, abs(z_new)):
            return z_new, k
        z = z_new
    raise NoConvergence(max_iter, z)


@dataclass(frozen=True)
class FrequencyResponse:
    omega: np.ndarray
    value: np.ndarray
    branch_ok: np.ndarray
    topology: str = ""
    equation: str = ""

    def __post_init__(self) -> None:
        if len(self.omega) != len(self.value) or len(self.omega) != len(self.branch_ok):
            raise ValueError("omega, value and branch_ok must have equal length")
        if np.any(self.omega <= 0) or np.any(np.diff(self.omega) <= 0):
            raise ValueError("omegas must be positive and strictly increasing")

    @property
    def samples(self) -> list[tuple[float, complex, bool]]:
        return [(float(w), complex(v), bool(ok)) for w, v, ok in zip(self.omega, self.value, self.branch_ok)]

    def __len__(self) -> int:
        return len(self.omega)


def log_grid(wmin: float, wmax: float, points: int) -> np.ndarray:
    if not (0 < wmin < wmax) or points < 2:
        raise ValueError("need 0 < wmin < wmax and points >= 2")
    grid = np.logspace(math.log10(wmin), math.log10(wmax), points)
    grid[0], grid[-1] = wmin, wmax
    return grid


def bode(
    eq: QuadraticImplicitOp, wmin: float, wmax: float, points: int, topology: str = ""
) -> FrequencyResponse:
    """Sweep the passive root over ``points`` log-spaced frequencies (endpoints included)."""
    omega = log_grid(wmin, wmax, points)
    value = np.empty(points, dtype=complex)
    ok = np.empty(points, dtype=bool)
    for i, w in enumerate(omega):
        try:
            value[i], ok[i] = quad_root(eq, complex(0.0, w))
        except ImplicitNetError:
            value[i], ok[i] = complex(math.nan, math.nan), False
    equation = f"{eq.a2!r}*L^2 + ({render(eq.b)})*L + ({render(eq.c)})"
    return FrequencyResponse(omega, value, ok, topology=topology, equation=equation)


def network_bode(spec: NetworkSpec, wmin: float, wmax: float, points: int) -> FrequencyResponse:
    return bode(derive(spec), wmin, wmax, points, topology=spec.topology)


def fit_order(fr: FrequencyResponse, wlo: float, whi: float) -> float:
    """Least-squares slope of ``log|Z|`` against ``log omega`` on ``[wlo, whi]``."""
    sel = (fr.omega >= wlo) & (fr.omega <= whi)
    if np.count_nonzero(sel) < 5:
        raise InsufficientSamples(f"only {np.count_nonzero(sel)} samples in [{wlo}, {whi}]; need 5")
    if not np.all(fr.branch_ok[sel]):
        raise BranchFailure("window contains samples without a passive root")
    x = np.log(fr.omega[sel])
    y = np.log(np.abs(fr.value[sel]))
    x = x - x.mean()
    y = y - y.mean()
    return float(np.dot(x, y) / np.dot(x, x))


def _g(x: float) -> str:
    return format(float(x) + 0.0, ".17g")


def write_bode_csv(fr: FrequencyResponse, out: io.TextIOBase) -> None:
    out.write("omega,re,im,abs,arg,branch_ok\n")
    for w, v, ok in zip(fr.omega, fr.value, fr.branch_ok):
        v = complex(v)
        out.write(f"{_g(w)},{_g(v.real)},{_g(v.imag)},{_g(abs(v))},{_g(cmath.phase(v))},{int(ok)}\n")
