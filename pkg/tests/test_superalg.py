from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from strategies import derivations, elements, homogeneous_elements, monomials
from superjets.errors import AlgebraMismatchError, GradingError, PreconditionError, SchemaError
from superjets.superalg import (
    Algebra,
    Derivation,
    EVEN,
    ODD,
    derivation_apply,
    derivation_commutator,
    even,
    jacobi_violations,
    mul,
    odd,
    partial,
    span_rank,
    substitute,
    to_scalar,
)

ALG = Algebra((even("x"), even("y"), odd("theta"), odd("eta")))


def test_odd_generators_anticommute_and_square_to_zero():
    theta, eta = ALG.gen("theta"), ALG.gen("eta")
    assert (theta * eta + eta * theta).is_zero()
    assert (theta * theta).is_zero()
    assert ALG.gen("x") * theta == theta * ALG.gen("x")


@settings(max_examples=50, deadline=None)
@given(elements(ALG), elements(ALG), elements(ALG))
def test_product_is_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=50, deadline=None)
@given(elements(ALG), st.sampled_from(ALG.names))
def test_split_recovers_the_element(a, name):
    free, linear = a.split(name)
    assert name not in free.generators_used()
    assert free + linear * ALG.gen(name) == a


def test_split_moves_odd_generator_to_the_right():
    theta, eta = ALG.gen("theta"), ALG.gen("eta")
    free, linear = (theta * eta).split("theta")
    assert free.is_zero()
    assert linear == -eta


def test_parse_and_print_in_canonical_order():
    alg = Algebra((even("x"), even("y")))
    a = alg.parse("x**2 + 3/2*y")
    assert str(a) == "3/2*y + x**2"
    assert str(alg.parse("x*y - 1")) == "-1 + x*y"
    assert str(alg.zero()) == "0"


def test_parse_rejects_unknown_and_odd_variables():
    with pytest.raises(SchemaError):
        ALG.parse("x + z")
    with pytest.raises(SchemaError):
        ALG.parse("theta*x")


def test_partial_derivative_signs():
    theta, eta = ALG.gen("theta"), ALG.gen("eta")
    assert partial(ALG, "theta")(theta * eta) == eta
    assert partial(ALG, "eta")(theta * eta) == -theta
    x = ALG.gen("x")
    assert partial(ALG, "x")(x ** 3) == x * x * 3


@settings(max_examples=50, deadline=None)
@given(monomials(ALG), elements(ALG), st.sampled_from(ALG.names))
def test_partial_derivative_is_a_graded_derivation(mono, b, name):
    a = ALG.monomial(mono)
    d = partial(ALG, name)
    sign = -1 if d.parity and a.parity() else 1
    assert d(a * b) == d(a) * b + (a * d(b)).scale(sign)


def test_embed_picks_up_reordering_sign():
    source = Algebra((odd("a"), odd("b")))
    target = Algebra((odd("b"), odd("a")))
    moved = (source.gen("a") * source.gen("b")).embed(target)
    assert moved == -(target.gen("b") * target.gen("a"))
    assert str(moved) == "-b*a"


def test_substitute_checks_parity():
    x, y = ALG.gen("x"), ALG.gen("y")
    assert substitute({"x": y}, x ** 2) == y ** 2
    with pytest.raises(GradingError):
        substitute({"theta": x}, ALG.gen("theta"))


def test_derivation_rejects_inhomogeneous_values():
    with pytest.raises(GradingError):
        Derivation(ALG, 1, ODD, {"x": ALG.gen("x")})


def test_elements_of_different_algebras_do_not_mix():
    other = Algebra((even("x"),))
    with pytest.raises(AlgebraMismatchError):
        ALG.gen("x") + other.gen("x")
    with pytest.raises(AlgebraMismatchError):
        mul(ALG.gen("x"), other.gen("x"))


def test_mul_is_supercommutative():
    x, theta, eta = ALG.gen("x"), ALG.gen("theta"), ALG.gen("eta")
    assert mul(theta, x) == mul(x, theta)
    assert mul(theta, eta) == -mul(eta, theta)


@settings(max_examples=50, deadline=None)
@given(homogeneous_elements(ALG), homogeneous_elements(ALG))
def test_homogeneous_elements_supercommute(a, b):
    sign = -1 if a.parity() and b.parity() else 1
    assert mul(a, b) == mul(b, a).scale(sign)


@settings(max_examples=40, deadline=None)
@given(derivations(ALG), homogeneous_elements(ALG), elements(ALG))
def test_derivations_satisfy_the_graded_leibniz_rule(d, a, b):
    sign = -1 if d.parity and a.parity() else 1
    assert d(a * b) == d(a) * b + (a * d(b)).scale(sign)


@settings(max_examples=25, deadline=None)
@given(derivations(ALG), derivations(ALG), derivations(ALG))
def test_derivation_commutator_satisfies_graded_jacobi(a, b, c):
    assert jacobi_violations((a, b, c)) == []


def test_derivation_commutator():
    A = Algebra((even("x"), odd("theta")))
    x = A.gen("x")
    d_x = partial(A, "x")
    euler = Derivation(A, 0, EVEN, {"x": x})
    assert derivation_apply(d_x, x ** 3) == (x ** 2).scale(3)
    assert derivation_commutator(d_x, euler) == d_x
    assert derivation_commutator(euler, d_x) == d_x.scale(-1)
    d_theta = partial(A, "theta")
    assert derivation_commutator(d_theta, d_theta).is_zero()


def test_span_rank():
    x, y = ALG.gen("x"), ALG.gen("y")
    assert span_rank([x, y, x + y]) == 2
    assert span_rank([]) == 0
    assert span_rank([ALG.zero()]) == 0


def test_scalars_are_exact():
    assert to_scalar("-3/4") == Fraction(-3, 4)
    assert to_scalar(2) == Fraction(2)
    with pytest.raises(TypeError):
        to_scalar(True)
    with pytest.raises(TypeError):
        to_scalar(0.5)


def test_negative_power_is_rejected():
    x = ALG.gen("x")
    assert x ** 0 == ALG.one()
    with pytest.raises(PreconditionError):
        x ** -1


def test_derivation_equality_sees_degree():
    A = Algebra((even("x"), odd("theta")))
    values = {"x": A.gen("x")}
    assert Derivation(A, 0, EVEN, values, strict=False) == Derivation(A, 0, EVEN, values)
    assert Derivation(A, 0, EVEN, values, strict=False) != Derivation(A, 2, EVEN, values, strict=False)
    assert Derivation(A, 0, EVEN, values, strict=False) != Derivation(A, 0, ODD, values, strict=False)
