"""Closed-form special cases of the quadratic operator equation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .errors import Degenerate
from .networks import QuadraticImplicitOp
from .operators import FracPoly, fp_add, fp_eval, fp_mul, fp_scale, fp_sqrt_monomial

__all__ = ["ExplicitResult", "try_explicit", "equivalent_order", "passive_root"]

Kind = Literal["perfect-square", "monomial-discriminant", "implicit"]


@dataclass(frozen=True)
class ExplicitResult:
    """Outcome of :func:`try_explicit`.

    ``roots`` is empty for ``implicit``, holds the double root once for
    ``perfect-square`` and ``(plus, minus)`` for ``monomial-discriminant``.
    """

    kind: Kind
    roots: tuple[FracPoly, ...] = ()

    @property
    def is_explicit(self) -> bool:
        return self.kind != "implicit"


def try_explicit(eq: QuadraticImplicitOp) -> ExplicitResult:
    """Look for an explicit solution ``L = sum c_i D^{a_i}``.

    Two exact cases are recognised on the monic equation
    ``L^2 + B L + C = 0``: ``B^2 = 4C`` gives the double root ``-B/2``; a
    discriminant ``B^2 - 4C = g D^mu`` with ``g > 0`` gives
    ``(-B +/- sqrt(g) D^(mu/2)) / 2``.  All comparisons are on term lists,
    never numeric closeness.
    """
    eq = eq.monic()
    B, C = eq.b, eq.c
    half_neg_b = fp_scale(B, -0.5)
    BB = fp_mul(B, B)
    four_c = fp_scale(C, 4.0)
    if BB == four_c:
        return ExplicitResult("perfect-square", (half_neg_b,))
    disc = fp_add(BB, fp_scale(four_c, -1.0))
    if disc.is_monomial() and disc.terms[0][0] > 0:
        # sqrt(disc)/2 == sqrt(disc/4); the quarter scaling is exact in binary
        half_root = fp_sqrt_monomial(fp_scale(disc, 0.25))
        plus = fp_add(half_neg_b, half_root)
        minus = fp_add(half_neg_b, fp_scale(half_root, -1.0))
        return ExplicitResult("monomial-discriminant", (plus, minus))
    return ExplicitResult("implicit")


def passive_root(result: ExplicitResult, probe: complex = 1.0) -> FracPoly | None:
    """The explicit root that is positive on the real axis, if there is one.

    Positive-real impedances are real and positive for real ``s > 0``; the
    root with the larger real part at ``probe`` is returned when that part is
    non-negative.
    """
    if not result.roots:
        return None
    best = max(result.roots, key=lambda r: fp_eval(r, probe).real)
    return best if fp_eval(best, probe).real >= 0 else None


def equivalent_order(eq: QuadraticImplicitOp) -> float:
    """Highest power of ``D`` in the equation divided by the power of ``L`` (2).

    The most positive exponent counts; integral terms (negative exponents)
    never raise the order.
    """
    exps = eq.b.exponents + eq.c.exponents
    if not exps:
        raise Degenerate("equation has no D-dependence: b and c are both zero")
    return max(exps) / 2.0
