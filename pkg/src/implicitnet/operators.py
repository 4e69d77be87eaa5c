"""Explicit operators: finite sums of fractional powers of the derivative.

A :class:`FracPoly` stores ``sum_i c_i D^{a_i}`` as a tuple of
``(coeff, exponent)`` pairs with strictly decreasing exponents and no zero
coefficients.  Multiplication follows the law of indices, and evaluation maps
``D^a`` to the principal branch of ``s**a``.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Iterable

from .errors import DomainError, NegativeCoefficient, NotMonomial, ParseError

__all__ = [
    "FracPoly",
    "ZERO",
    "ONE",
    "D",
    "monomial",
    "fp_add",
    "fp_mul",
    "fp_scale",
    "fp_eval",
    "fp_eval_mp",
    "fp_sqrt_monomial",
    "fp_parse",
    "render",
    "render_compact",
]

Term = tuple[float, float]


def _normalize(terms: Iterable[Term]) -> tuple[Term, ...]:
    buckets: dict[float, list[float]] = {}
    for coeff, exponent in terms:
        coeff = float(coeff)
        exponent = float(exponent) + 0.0  # folds -0.0 into 0.0
        if not (math.isfinite(coeff) and math.isfinite(exponent)):
            raise ValueError(f"non-finite term ({coeff}, {exponent})")
        buckets.setdefault(exponent, []).append(coeff)
    # fsum keeps merged coefficients independent of the order terms arrived in
    merged = ((math.fsum(cs), e) for e, cs in buckets.items())
    return tuple(sorted(((c, e) for c, e in merged if c != 0.0), key=lambda t: -t[1]))


@dataclass(frozen=True)
class FracPoly:
    """Immutable ``sum_i c_i D^{a_i}`` in canonical order.

    The constructor accepts any iterable of ``(coeff, exponent)`` pairs and
    restores the invariants (merging, dropping zeros, sorting).  The empty
    polynomial is the zero operator.
    """

    terms: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", _normalize(self.terms))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other: FracPoly) -> FracPoly:
        return fp_add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self) -> FracPoly:
        return fp_scale(self, -1.0)

    def __sub__(self, other: FracPoly) -> FracPoly:
        return fp_add(self, -_coerce(other))

    def __rsub__(self, other: FracPoly) -> FracPoly:
        return fp_add(_coerce(other), -self)

    def __mul__(self, other: FracPoly | float) -> FracPoly:
        return fp_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __call__(self, s: complex) -> complex:
        return fp_eval(self, s)

    def __str__(self) -> str:
        return render(self)

    @property
    def exponents(self) -> tuple[float, ...]:
        return tuple(e for _, e in self.terms)

    @property
    def max_exponent(self) -> float:
        if not self.terms:
            raise ValueError("zero operator has no exponents")
        return self.terms[0][1]

    def is_monomial(self) -> bool:
        return len(self.terms) == 1


def _coerce(x: FracPoly | float | int) -> FracPoly:
    if isinstance(x, FracPoly):
        return x
    if isinstance(x, (int, float)):
        return FracPoly(((float(x), 0.0),))
    raise TypeError(f"cannot use {type(x).__name__} as an operator")


def monomial(coeff: float, exponent: float) -> FracPoly:
    return FracPoly(((coeff, exponent),))


ZERO = FracPoly()
ONE = monomial(1.0, 0.0)
D = monomial(1.0, 1.0)


def fp_add(f: FracPoly, g: FracPoly) -> FracPoly:
    return FracPoly(f.terms + g.terms)


def fp_mul(f: FracPoly, g: FracPoly) -> FracPoly:
    """Product by the law of indices, ``D^a D^b = D^(a+b)``."""
    return FracPoly((cf * cg, ef + eg) for cf, ef in f.terms for cg, eg in g.terms)


def fp_scale(f: FracPoly, factor: float) -> FracPoly:
    return FracPoly((c * factor, e) for c, e in f.terms)


def _is_integer(x: float) -> bool:
    return x == math.floor(x)


def fp_eval(f: FracPoly, s: complex) -> complex:
    """Evaluate ``f`` at the Laplace variable ``s`` (principal branch).

    Raises
    ------
    DomainError
        If ``s == 0`` and a term has a negative or non-integer exponent, or if
        ``s`` lies on the negative real axis and a term is non-integer.
    """
    s = complex(s)
    on_cut = s.imag == 0.0 and s.real <= 0.0
    total = 0j
    for coeff, exponent in f.terms:
        if _is_integer(exponent):
            k = int(exponent)
            if k < 0 and s == 0:
                raise DomainError(f"D^{exponent} is singular at s=0")
            total += coeff * s**k
        else:
            if on_cut:
                raise DomainError(f"D^{exponent} is on its branch cut at s={s}")
            total += coeff * cmath.exp(exponent * cmath.log(s))
    return total


def fp_eval_mp(f: FracPoly, s):
    """:func:`fp_eval` in the current :mod:`mpmath` precision."""
    import mpmath

    s = mpmath.mpc(s)
    on_cut = s.imag == 0 and s.real <= 0
    total = mpmath.mpc(0)
    for coeff, exponent in f.terms:
        if _is_integer(exponent):
            k = int(exponent)
            if k < 0 and s == 0:
                raise DomainError(f"D^{exponent} is singular at s=0")
            total += mpmath.mpf(coeff) * s**k
        else:
            if on_cut:
                raise DomainError(f"D^{exponent} is on its branch cut at s={s}")
            total += mpmath.mpf(coeff) * mpmath.power(s, mpmath.mpf(exponent))
    return total


def fp_sqrt_monomial(f: FracPoly) -> FracPoly:
    """Square root of a single positive term: ``c D^a -> sqrt(c) D^(a/2)``."""
    if len(f.terms) != 1:
        raise NotMonomial(f"expected one term, got {len(f.terms)}: {render(f)}")
    coeff, exponent = f.terms[0]
    if coeff <= 0:
        raise NegativeCoefficient(f"coefficient {coeff!r} is not positive")
    return monomial(math.sqrt(coeff), exponent / 2.0)


def _fmt(x: float) -> str:
    return format(x + 0.0, ".17g")


def render(f: FracPoly) -> str:
    """Canonical text, e.g. ``1*D^1 + 2*D^0``; ``0`` for the zero operator."""
    if not f.terms:
        return "0"
    return " + ".join(f"{_fmt(c)}*D^{_fmt(e)}" for c, e in f.terms)


def render_compact(f: FracPoly) -> str:
    """Like :func:`render` but writes ``D^0`` terms as bare numbers."""
    if not f.terms:
        return "0"
    return " + ".join(_fmt(c) if e == 0.0 else f"{_fmt(c)}*D^{_fmt(e)}" for c, e in f.terms)


_FLOAT = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_WS = re.compile(r"\s*")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        self.pos = _WS.match(self.text, self.pos).end()

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def literal(self, lit: str) -> bool:
        self.skip()
        if self.text.startswith(lit, self.pos):
            self.pos += len(lit)
            return True
        return False

    def number(self) -> float:
        self.skip()
        m = _FLOAT.match(self.text, self.pos)
        if not m:
            raise ParseError("expected a number", self._offset())
        self.pos = m.end()
        return float(m.group())

    def _offset(self) -> int:
        return len(self.text[: self.pos].encode("utf-8"))


def fp_parse(text: str) -> FracPoly:
    """Parse ``term (+ term)*`` where ``term`` is ``c*D^a`` or a bare ``c``."""
    sc = _Scanner(text)
    terms: list[Term] = []
    while True:
        if sc.literal("D^"):
            # bare "D^a" is not in the grammar; a coefficient is required
            raise ParseError("missing coefficient before 'D^'", sc._offset() - 2)
        coeff = sc.number()
        exponent = 0.0
        if sc.literal("*"):
            if not sc.literal("D^"):
                raise ParseError("expected 'D^' after '*'", sc._offset())
            exponent = sc.number()
        terms.append((coeff, exponent))
        if sc.at_end():
            break
        if not sc.literal("+"):
            raise ParseError("expected '+' or end of input", sc._offset())
    return FracPoly(terms)
