from fractions import Fraction

import pytest
from hypothesis import given, settings

from strategies import elements
from superjets.dgman import (
    CoordinateMap,
    QStructure,
    SemigroupElement,
    check_de_rham_semigroup,
    check_q,
    closed_form_basis,
    compose_semigroup,
    de_rham,
    euler,
    form_basis,
    identity_coordinate_map,
    is_dg_manifold,
    manifold,
    parameter_algebra,
    pit,
    pit_map,
    pit_power,
    semigroup_act,
    taylor_map,
    taylor_point,
)
from superjets.errors import GradingError, PreconditionError
from superjets.superalg import Algebra, even, odd

X = manifold(even("x"), even("y"))
Y = manifold(even("u"), even("v"))
Z = manifold(even("w"))


def test_pit_adds_shifted_opposite_parity_coordinates():
    T = pit(manifold(even("x"), odd("theta")))
    assert T.names == ("x", "theta", "dx", "dtheta")
    assert T.algebra.spec("dx").degree == 1
    assert T.algebra.spec("dx").parity == 1
    assert T.algebra.spec("dtheta").degree == 2
    assert T.algebra.spec("dtheta").parity == 0
    assert pit_power(X, 2).tangent_level == 2


def test_de_rham_squares_to_zero():
    T = pit(manifold(even("x"), odd("theta")))
    assert check_q(de_rham(T)).ok
    TT = pit_power(X, 2)
    assert check_q(de_rham(TT, 1)).ok
    assert check_q(de_rham(TT, 2)).ok


def test_de_rham_needs_a_tangent_level():
    with pytest.raises(PreconditionError):
        de_rham(X)


def test_q_structure_must_be_odd_of_degree_one():
    T = pit(X)
    with pytest.raises(GradingError):
        QStructure(T, euler(T))


def test_action_generates_de_rham_and_euler():
    assert check_de_rham_semigroup(pit(manifold(even("x"), odd("theta")))).ok
    TT = pit_power(X, 2)
    assert check_de_rham_semigroup(TT, 1).ok
    assert check_de_rham_semigroup(TT, 2).ok


def test_semigroup_composition_law():
    params = parameter_algebra(2)
    b1, b2 = params.gen("beta1"), params.gen("beta2")
    composite = compose_semigroup(SemigroupElement(2, b1), SemigroupElement(3, b2), params)
    assert composite.a == Fraction(6)
    assert composite.beta == b1 + b2.scale(2)


def test_semigroup_act_on_the_odd_tangent_bundle():
    T = pit(manifold(even("x")))
    params = parameter_algebra(1)
    act = semigroup_act(SemigroupElement(2, params.gen("beta1")), T, params)
    target = act.target
    assert act(T.gen("x")) == target.gen("x") + target.gen("dx") * target.gen("beta1")
    assert act(T.gen("dx")) == target.gen("dx").scale(2)


def test_is_dg_manifold_compares_parity_and_degree():
    assert is_dg_manifold(pit(X))
    assert is_dg_manifold(manifold(odd("theta")))
    assert not is_dg_manifold(manifold(even("t", 1)))


@settings(max_examples=50, deadline=None)
@given(elements(X.algebra), elements(X.algebra), elements(Y.algebra))
def test_pit_map_is_functorial(u, v, w):
    phi = CoordinateMap(X, Y, {"u": u, "v": v})
    psi = CoordinateMap(Y, Z, {"w": w})
    assert pit_map(phi.then(psi)).same_as(pit_map(phi).then(pit_map(psi)))


def test_pit_map_preserves_identities():
    assert pit_map(identity_coordinate_map(X)).same_as(identity_coordinate_map(pit(X)))


def test_pit_map_pulls_back_differentials():
    phi = CoordinateMap(X, Z, {"w": X.algebra.parse("x**2*y")})
    lifted = pit_map(phi)
    source = lifted.source.algebra
    expected = source.parse("2*x*y") * source.gen("dx") + source.parse("x**2") * source.gen("dy")
    assert lifted.image("dw") == expected


def test_taylor_coefficients_round_trip():
    S = manifold(even("x"), odd("theta"))
    alg = Algebra((even("x"), odd("theta"), odd("dx"), even("dtheta"), odd("t")))
    t = alg.gen("t")
    path = {"x": alg.gen("x") + alg.gen("dx") * t, "theta": alg.gen("theta") + alg.gen("dtheta") * t}
    point = taylor_point(S, path, "t")
    assert point == {
        "x": alg.gen("x"),
        "dx": alg.gen("dx"),
        "theta": alg.gen("theta"),
        "dtheta": alg.gen("dtheta"),
    }
    assert taylor_map(S, point, "t") == path


def test_form_basis_size():
    _, basis = form_basis(2, 1)
    assert len(basis) == 8
    _, basis = form_basis(3, 2)
    assert len(basis) == 8 * 6


@pytest.mark.parametrize("k", range(6))
def test_closed_forms_on_one_odd_line(k):
    _, closed = closed_form_basis(1, k)
    assert len(closed) == 1


def test_closed_forms_on_the_odd_plane_and_the_point():
    assert len(closed_form_basis(2, 1)[1]) == 3
    assert len(closed_form_basis(2, 2)[1]) == 5
    assert len(closed_form_basis(0, 0)[1]) == 1
    assert closed_form_basis(0, 1)[1] == []
