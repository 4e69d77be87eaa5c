"""Exception hierarchy shared by every module of :mod:`implicitnet`."""

from __future__ import annotations


class ImplicitNetError(Exception):
    """Base class for all errors raised by this package."""


# operator algebra
class DomainError(ImplicitNetError, ValueError):
    """Evaluation point outside the principal-branch domain of a term."""


class NotMonomial(ImplicitNetError, ValueError):
    pass


class NegativeCoefficient(ImplicitNetError, ValueError):
    pass


class ParseError(ImplicitNetError, ValueError):
    """Malformed operator text; ``offset`` is the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


# network models / solver
class InvalidParameter(ImplicitNetError, ValueError):
    pass


class ZeroOperator(ImplicitNetError, ValueError):
    pass


class InvalidArity(ImplicitNetError, ValueError):
    pass


class Degenerate(ImplicitNetError, ValueError):
    pass


# frequency domain
class DegenerateEquation(ImplicitNetError, ValueError):
    pass


class NumericBlowup(ImplicitNetError, ArithmeticError):
    pass


class NoConvergence(ImplicitNetError, ArithmeticError):
    """Fixed-point iteration did not settle; ``last`` holds the final iterate."""

    def __init__(self, max_iter: int, last: complex):
        super().__init__(f"no convergence after {max_iter} iterations (last={last!r})")
        self.max_iter = max_iter
        self.last = last


class InsufficientSamples(ImplicitNetError, ValueError):
    pass


class BranchFailure(ImplicitNetError, ArithmeticError):
    """No quadratic root with non-negative real part was available."""


# time domain
class InvalidOrder(ImplicitNetError, ValueError):
    pass


class SingularStep(ImplicitNetError, ZeroDivisionError):
    pass


class EvaluationError(ImplicitNetError, ArithmeticError):
    pass
