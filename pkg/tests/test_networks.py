import pytest
from hypothesis import given
from hypothesis import strategies as st

from implicitnet.errors import InvalidArity, InvalidParameter, ZeroOperator
from implicitnet.networks import (
    ComponentModel,
    NetworkSpec,
    QuadraticImplicitOp,
    component_operator,
    derive,
    derive_ladder,
    derive_multitree,
    derive_tree,
)
from implicitnet.operators import ONE, ZERO, D, FracPoly, fp_mul, monomial
from implicitnet.solver import try_explicit


def test_component_operators():
    assert component_operator(ComponentModel.rlc_series(L=1, R=2, C=0.5)) == FracPoly([(1, 1), (2, 0), (2, -1)])
    assert component_operator(ComponentModel.pipe(a=3, b=2)) == FracPoly([(0.5, 1), (1.5, 0)])
    assert component_operator(ComponentModel.rod(a=3, b=2)) == FracPoly([(0.5, 1), (1.5, 0)])
    assert component_operator(ComponentModel.spring_damper(c=1, k=1)) == D + ONE
    raw = FracPoly([(2, 0.5)])
    assert component_operator(ComponentModel.from_operator(raw)) is raw


@pytest.mark.parametrize(
    "kind, params",
    [
        ("rlc_series", {"L": 1, "R": 0, "C": 1}),
        ("rlc_series", {"L": 1, "R": 1}),
        ("pipe", {"a": 1, "b": -2}),
        ("spring_damper", {"c": 1, "k": float("inf")}),
        ("spring_damper", {"c": 1, "k": 1, "m": 2}),
        ("widget", {}),
    ],
)
def test_invalid_components(kind, params):
    with pytest.raises(InvalidParameter):
        ComponentModel(kind, params)


def test_raw_component_must_be_nonzero():
    with pytest.raises(InvalidParameter):
        ComponentModel.from_operator(ZERO)


# powers of two keep 1/b and a/b exact
@given(st.floats(0.01, 100), st.integers(-8, 8).map(lambda k: 2.0**k), st.sampled_from(["pipe", "rod"]))
def test_pipe_rod_normal_form(a, b, kind):
    op = component_operator(ComponentModel(kind, {"a": a, "b": b}))
    assert fp_mul(op, monomial(b, 0)) == D + monomial(a, 0)


def test_derive_tree():
    eq = derive_tree(D, D)
    assert (eq.a2, eq.b, eq.c) == (1.0, ZERO, monomial(-1, 2))
    f = ONE + monomial(3, 0.5)
    assert derive_tree(f, f).c == -fp_mul(f, f)
    eq = derive_tree(ONE + D, ONE + monomial(1, 2))
    assert eq.c == -FracPoly([(1, 0), (1, 1), (1, 2), (1, 3)])


def test_derive_multitree_examples():
    La, Lb = D, ONE
    rec = derive_multitree(La, Lb, 2, 0, "recursion")
    assert (rec.a2, rec.b, rec.c) == (1.0, ONE - D, -D)
    pap = derive_multitree(La, Lb, 2, 0, "paper")
    assert (pap.a2, pap.b, pap.c) == (1.0, D - ONE, -D)
    eq = derive_multitree(La, Lb, 3, 2)
    assert eq.a2 == 4.0
    assert eq.b == monomial(1, 1) + monomial(2, 0)


@pytest.mark.parametrize("convention", ["recursion", "paper"])
def test_multitree_reduces_to_tree(convention):
    La, Lb = ONE + monomial(2, 1.5), FracPoly([(3, -1), (0.25, 2)])
    assert derive_multitree(La, Lb, 1, 1, convention) == derive_tree(La, Lb)


small_polys = st.lists(
    st.tuples(st.integers(1, 16).map(lambda k: k / 4.0), st.integers(-2, 4).map(lambda k: k / 2.0)),
    min_size=1,
    max_size=3,
).map(FracPoly)


@given(small_polys, small_polys, st.integers(1, 5), st.integers(1, 5), st.sampled_from(["recursion", "paper"]))
def test_multitree_swap_symmetry(La, Lb, m, n, convention):
    assert derive_multitree(La, Lb, m, n, convention) == derive_multitree(Lb, La, n, m, convention)


@pytest.mark.parametrize("m, n", [(0, 2), (1, 0), (2, -1), (1.5, 1), (True, 1)])
def test_multitree_bad_arity(m, n):
    with pytest.raises(InvalidArity):
        derive_multitree(D, ONE, m, n)


def test_derive_ladder():
    eq = derive_ladder(ONE, D)
    assert (eq.a2, eq.b, eq.c) == (1.0, -ONE, -D)
    f = ONE + D
    eq = derive_ladder(f, f)
    assert eq.b == -f
    assert eq.c == -fp_mul(f, f)


@pytest.mark.parametrize("derive_fn", [derive_tree, derive_ladder, lambda a, b: derive_multitree(a, b, 2, 1)])
def test_zero_operator_rejected(derive_fn):
    with pytest.raises(ZeroOperator):
        derive_fn(ZERO, D)
    with pytest.raises(ZeroOperator):
        derive_fn(D, ZERO)


def test_derive_dispatch_and_spec_validation():
    spec = NetworkSpec("ladder", ComponentModel.spring_damper(1, 1), ComponentModel.from_operator(D))
    assert derive(spec) == derive_ladder(D + ONE, D)
    spec = NetworkSpec.from_operators("multitree", D, ONE, m=1, n=1)
    assert derive(spec) == derive_tree(D, ONE)
    with pytest.raises(InvalidArity):
        NetworkSpec.from_operators("multitree", D, ONE, m=1, n=0)
    with pytest.raises(InvalidParameter):
        NetworkSpec.from_operators("mesh", D, ONE)


def test_quadratic_requires_positive_leading_coefficient():
    with pytest.raises(InvalidParameter):
        QuadraticImplicitOp(0.0, ZERO, ONE)


def test_monomial_tree_has_sqrt_root():
    a, b, n, m = 2.0, 3.0, 1, 1
    result = try_explicit(derive_tree(monomial(a, n), monomial(b, m)))
    assert result.roots[0] == monomial((a * b) ** 0.5, (n + m) / 2)
