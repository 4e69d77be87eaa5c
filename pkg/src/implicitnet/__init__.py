"""Implicit operators of infinite self-similar networks.

Components obeying integer-order laws, repeated without end in a tree or a
ladder, combine into an equivalent operator ``L`` that is only defined
implicitly by a quadratic ``a2 L^2 + B(D) L + C(D) = 0``.  This package
derives that equation, solves it in closed form when possible, and otherwise
evaluates it in the frequency and time domains.
"""

from .errors import ImplicitNetError
from .frequency import OPEN, FrequencyResponse, bode, fit_order, fixed_point, quad_root, truncated_response
from .kernels import BACKEND
from .networks import (
    ComponentModel,
    NetworkSpec,
    QuadraticImplicitOp,
    component_operator,
    derive,
    derive_ladder,
    derive_multitree,
    derive_tree,
)
from .operators import D, ONE, ZERO, FracPoly, fp_add, fp_eval, fp_mul, fp_parse, fp_sqrt_monomial, monomial, render
from .solver import ExplicitResult, equivalent_order, passive_root, try_explicit
from .timedomain import (
    TimeSeries,
    caputo_derivative,
    gl_apply,
    gl_weights,
    ilt_point,
    simulate_explicit,
    step_response_implicit,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "bode",
    "caputo_derivative",
    "component_operator",
    "ComponentModel",
    "D",
    "derive",
    "derive_ladder",
    "derive_multitree",
    "derive_tree",
    "equivalent_order",
    "ExplicitResult",
    "fit_order",
    "fixed_point",
    "fp_add",
    "fp_eval",
    "fp_mul",
    "fp_parse",
    "fp_sqrt_monomial",
    "FracPoly",
    "FrequencyResponse",
    "gl_apply",
    "gl_weights",
    "ilt_point",
    "ImplicitNetError",
    "monomial",
    "NetworkSpec",
    "ONE",
    "OPEN",
    "passive_root",
    "quad_root",
    "QuadraticImplicitOp",
    "render",
    "simulate_explicit",
    "step_response_implicit",
    "TimeSeries",
    "truncated_response",
    "try_explicit",
    "ZERO",
]
