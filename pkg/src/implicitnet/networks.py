"""Physical components and the quadratic equations of self-similar networks.

Every component is reduced to the normal form ``L(u) = dphi`` so that trees,
multi-furcating trees and ladders can be derived from a pair of
:class:`~implicitnet.operators.FracPoly` operators alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

from .errors import InvalidArity, InvalidParameter, ZeroOperator
from .operators import FracPoly, fp_add, fp_mul, fp_scale

__all__ = [
    "ComponentModel",
    "NetworkSpec",
    "QuadraticImplicitOp",
    "component_operator",
    "derive_tree",
    "derive_multitree",
    "derive_ladder",
    "derive",
]

Kind = Literal["rlc_series", "pipe", "rod", "spring_damper", "raw"]
Topology = Literal["tree", "multitree", "ladder"]
Convention = Literal["recursion", "paper"]

_PARAMS: dict[str, tuple[str, ...]] = {
    "rlc_series": ("L", "R", "C"),
    "pipe": ("a", "b"),
    "rod": ("a", "b"),
    "spring_damper": ("c", "k"),
    "raw": (),
}


@dataclass(frozen=True)
class ComponentModel:
    """One repeated network element.

    ``params`` holds the physical constants by name (``L``, ``R``, ``C`` for
    ``rlc_series``; ``a``, ``b`` for ``pipe``/``rod``; ``c``, ``k`` for
    ``spring_damper``).  ``raw`` components carry their operator directly.
    """

    kind: Kind
    params: dict[str, float] = field(default_factory=dict)
    raw: FracPoly | None = None

    def __post_init__(self) -> None:
        if self.kind not in _PARAMS:
            raise InvalidParameter(f"unknown component kind {self.kind!r}")
        if self.kind == "raw":
            if self.raw is None or not self.raw:
                raise InvalidParameter("raw component needs a nonzero operator")
            return
        expected = _PARAMS[self.kind]
        missing = [p for p in expected if p not in self.params]
        extra = [p for p in self.params if p not in expected]
        if missing or extra:
            raise InvalidParameter(
                f"{self.kind} takes parameters {expected}; missing {missing}, unexpected {extra}"
            )
        for name in expected:
            value = self.params[name]
            if not (math.isfinite(value) and value > 0):
                raise InvalidParameter(f"{self.kind}.{name} must be positive and finite, got {value!r}")

    def __hash__(self) -> int:
        return hash((self.kind, tuple(sorted(self.params.items())), self.raw))

    @classmethod
    def rlc_series(cls, L: float, R: float, C: float) -> ComponentModel:
        return cls("rlc_series", {"L": L, "R": R, "C": C})

    @classmethod
    def pipe(cls, a: float, b: float) -> ComponentModel:
        return cls("pipe", {"a": a, "b": b})

    @classmethod
    def rod(cls, a: float, b: float) -> ComponentModel:
        return cls("rod", {"a": a, "b": b})

    @classmethod
    def spring_damper(cls, c: float, k: float) -> ComponentModel:
        return cls("spring_damper", {"c": c, "k": k})

    @classmethod
    def from_operator(cls, op: FracPoly) -> ComponentModel:
        return cls("raw", raw=op)


def component_operator(cm: ComponentModel) -> FracPoly:
    """Operator ``L`` with ``L(u) = dphi`` for a component.

    Pipe and rod laws are written ``[D + a](u) = b dphi``; they are returned
    divided through by ``b``.
    """
    p = cm.params
    if cm.kind == "rlc_series":
        return FracPoly(((p["L"], 1.0), (p["R"], 0.0), (1.0 / p["C"], -1.0)))
    if cm.kind in ("pipe", "rod"):
        return FracPoly(((1.0 / p["b"], 1.0), (p["a"] / p["b"], 0.0)))
    if cm.kind == "spring_damper":
        return FracPoly(((p["c"], 1.0), (p["k"], 0.0)))
    return cm.raw


@dataclass(frozen=True)
class QuadraticImplicitOp:
    """``a2 L^2 + b(D) L + c(D) = 0`` defining an implicit operator ``L``."""

    a2: float
    b: FracPoly
    c: FracPoly

    def __post_init__(self) -> None:
        if not (self.a2 > 0 and math.isfinite(self.a2)):
            raise InvalidParameter(f"leading coefficient must be positive, got {self.a2!r}")

    def monic(self) -> QuadraticImplicitOp:
        if self.a2 == 1.0:
            return self
        inv = 1.0 / self.a2
        return QuadraticImplicitOp(1.0, fp_scale(self.b, inv), fp_scale(self.c, inv))

    def residual(self, lam: complex, s: complex) -> tuple[complex, float]:
        """Equation residual at ``s`` and the magnitude scale it is judged by."""
        t2 = self.a2 * lam * lam
        t1 = self.b(s) * lam
        t0 = self.c(s)
        return t2 + t1 + t0, abs(t2) + abs(t1) + abs(t0)


def _check_nonzero(La: FracPoly, Lb: FracPoly) -> None:
    if not La or not Lb:
        raise ZeroOperator("component operators must be nonzero")


def derive_tree(La: FracPoly, Lb: FracPoly) -> QuadraticImplicitOp:
    """Infinite bifurcating tree: ``L^2 - La Lb = 0``."""
    _check_nonzero(La, Lb)
    return QuadraticImplicitOp(1.0, FracPoly(), fp_scale(fp_mul(La, Lb), -1.0))


def derive_multitree(
    La: FracPoly,
    Lb: FracPoly,
    m: int,
    n: int,
    convention: Convention = "recursion",
) -> QuadraticImplicitOp:
    """Tree with ``m`` branches of ``La`` and ``n`` of ``Lb`` at every junction.

    Flow conservation at a junction gives
    ``(m+n-1) L^2 + ((n-1) La + (m-1) Lb) L - La Lb = 0``
    (``convention="recursion"``).  ``convention="paper"`` swaps the two
    linear coefficients, i.e. ``(m-1) La + (n-1) Lb``.
    """
    if isinstance(m, bool) or isinstance(n, bool) or int(m) != m or int(n) != n:
        raise InvalidArity(f"m and n must be integers, got m={m!r}, n={n!r}")
    m, n = int(m), int(n)
    if m < 1 or n < 0 or not (m + n >= 2):
        raise InvalidArity(f"need m >= 1, n >= 0, m + n >= 2; got m={m}, n={n}")
    if convention not in ("recursion", "paper"):
        raise InvalidArity(f"unknown convention {convention!r}")
    _check_nonzero(La, Lb)
    if convention == "recursion":
        ka, kb = n - 1, m - 1
    else:
        ka, kb = m - 1, n - 1
    b = fp_add(fp_scale(La, float(ka)), fp_scale(Lb, float(kb)))
    c = fp_scale(fp_mul(La, Lb), -1.0)
    return QuadraticImplicitOp(float(n + m - 1), b, c)


def derive_ladder(La: FracPoly, Lb: FracPoly) -> QuadraticImplicitOp:
    """Infinite ladder (series ``La``, shunt ``Lb``): ``L^2 - La L - La Lb = 0``."""
    _check_nonzero(La, Lb)
    return QuadraticImplicitOp(1.0, fp_scale(La, -1.0), fp_scale(fp_mul(La, Lb), -1.0))


@dataclass(frozen=True)
class NetworkSpec:
    """Topology plus the two repeated components."""

    topology: Topology
    component_a: ComponentModel
    component_b: ComponentModel
    m: int = 1
    n: int = 1
    convention: Convention = "recursion"

    def __post_init__(self) -> None:
        if self.topology not in ("tree", "multitree", "ladder"):
            raise InvalidParameter(f"unknown topology {self.topology!r}")
        if self.topology == "multitree" and (self.m < 1 or self.n < 0 or self.m + self.n < 2):
            raise InvalidArity(f"need m >= 1, n >= 0, m + n >= 2; got m={self.m}, n={self.n}")

    @classmethod
    def from_operators(cls, topology: Topology, La: FracPoly, Lb: FracPoly, **kw) -> NetworkSpec:
        return cls(topology, ComponentModel.from_operator(La), ComponentModel.from_operator(Lb), **kw)

    @property
    def La(self) -> FracPoly:
        return component_operator(self.component_a)

    @property
    def Lb(self) -> FracPoly:
        return component_operator(self.component_b)


def derive(spec: NetworkSpec) -> QuadraticImplicitOp:
    La, Lb = spec.La, spec.Lb
    if spec.topology == "tree":
        return derive_tree(La, Lb)
    if spec.topology == "ladder":
        return derive_ladder(La, Lb)
    return derive_multitree(La, Lb, spec.m, spec.n, spec.convention)

