import pytest

from superjets.dgman import check_q
from superjets.errors import PreconditionError, SchemaError
from superjets.linfty import is_q_isomorphism, lie_to_linfty, mc_check
from superjets.nervejet import (
    PolyGroupLaw,
    abelian_law,
    descent_mc_bijection,
    descent_naturality,
    descent_violations,
    fiber_form_algebra,
    general_descent_datum,
    general_mc_element,
    group_inverse,
    heisenberg_law,
    lie_from_group_law,
    nerve_one_jet,
    upper_triangular_law,
)
from superjets.superalg import Algebra, GenSpec, ODD, substitute


def test_heisenberg_law_and_its_lie_algebra():
    F = heisenberg_law()
    assert F.check().ok
    lie = lie_from_group_law(F)
    assert lie.constants == {("x", "y"): {"z": 1}}


def test_group_inverse():
    F = heisenberg_law()
    slots = F.slot_algebra(1)
    u = F.slot_point(1, slots)
    inverse = group_inverse(F, u, slots)
    assert inverse["z"] == slots.parse("-z_1 + x_1*y_1")
    product = F.multiply(u, inverse, slots)
    assert all(value.is_zero() for value in product.values())


def test_non_associative_law_is_rejected():
    F = PolyGroupLaw(("x",), {"x": "x_1 + x_2 + x_1*x_2**2"})
    assert F.check().kind == "associativity"
    with pytest.raises(PreconditionError):
        lie_from_group_law(F)


def test_law_schema_errors():
    with pytest.raises(SchemaError):
        PolyGroupLaw(("x", "y"), {"x": "x_1 + x_2"})
    with pytest.raises(SchemaError):
        PolyGroupLaw(("theta",), {"theta": "theta_1 + theta_2"})


def test_heisenberg_nerve_jet_is_the_ce_differential():
    jet = nerve_one_jet(heisenberg_law())
    assert jet.ok
    assert jet.isomorphism.ok
    assert jet.degrees == {"x": 1, "y": 1, "z": 1}
    assert [spec.degree for spec in jet.q_structure.algebra.gens] == [1, 1, 1]
    assert jet.q_structure.Q.value("z") == -jet.ce.Q.value("z")
    assert check_q(jet.q_structure).ok


@pytest.mark.parametrize("F", [abelian_law(2), upper_triangular_law(3), upper_triangular_law(4)])
def test_nerve_jets_of_nilpotent_laws(F):
    jet = nerve_one_jet(F)
    assert jet.ok
    assert set(jet.degrees.values()) == {1}


def test_abelian_nerve_jet_vanishes():
    assert nerve_one_jet(abelian_law(3)).q_structure.Q.is_zero()


def test_nerve_jet_records_the_horn_filling_levels():
    jet = nerve_one_jet(heisenberg_law())
    assert [level["level"] for level in jet.levels] == [0, 1, 2]
    assert jet.levels[0]["point"] == {"x": "0", "y": "0", "z": "0"}
    assert jet.levels[1]["jets"]["x"] == "x*theta"
    lift = jet.levels[2]["horn_lift"]
    assert set(lift) == {"x", "y", "z"}
    assert "theta1" in lift["x"] and "theta2" in lift["x"]
    assert "x*y*theta1*theta2" in lift["z"]
    assert "x*y" not in lift["x"]


def test_nerve_jet_isomorphism_has_invertible_linear_part():
    jet = nerve_one_jet(heisenberg_law(), splitting=[[2, 0, 0], [0, 1, 0], [1, 0, 1]])
    assert jet.isomorphism.ok
    assert is_q_isomorphism(jet.images, jet.ce, jet.q_structure).ok
    collapsed = dict(jet.images, z=jet.images["x"])
    assert not is_q_isomorphism(collapsed, jet.ce, jet.q_structure).ok


def test_nerve_jet_with_a_splitting():
    jet = nerve_one_jet(heisenberg_law(), splitting=[[1, 0, 0], [1, 1, 0], [0, 0, 2]])
    assert jet.ok
    with pytest.raises(PreconditionError):
        nerve_one_jet(heisenberg_law(), splitting=[[1, 0, 0], [1, 0, 0], [0, 0, 1]])


@pytest.mark.parametrize("F, q", [
    (abelian_law(1), 1),
    (abelian_law(1), 2),
    (abelian_law(2), 2),
    (heisenberg_law(), 2),
    (heisenberg_law(), 3),
])
def test_descent_data_match_maurer_cartan_elements(F, q):
    report = descent_mc_bijection(F, q)
    assert report.ok, report.failures
    assert report.descent_dimension == report.mc_dimension
    assert set(report.generic_connection) == set(F.coordinates)


@pytest.mark.parametrize("F, q, dimension", [
    (abelian_law(1), 1, 1),
    (abelian_law(2), 2, 4),
    (heisenberg_law(), 2, 6),
    (heisenberg_law(), 3, 12),
])
def test_descent_dimensions_come_from_the_solution(F, q, dimension):
    report = descent_mc_bijection(F, q)
    assert report.descent_dimension == dimension
    assert report.mc_dimension == dimension
    assert report.unknowns > 2 * dimension


def test_trivial_parameter_algebra_has_only_the_trivial_datum():
    report = descent_mc_bijection(abelian_law(1), 0)
    assert report.ok
    assert report.dimension == 0
    g, _, free = general_descent_datum(heisenberg_law(), 0)
    assert free == 0
    assert all(value.is_zero() for value in g.values())


def test_general_descent_datum_satisfies_the_cocycle_law():
    F = heisenberg_law()
    g, ansatz, free = general_descent_datum(F, 2)
    assert free == 6
    assert descent_violations(F, g, ansatz.ring) == []
    ring = ansatz.ring
    # the z-part of g(θ1, θ2) carries the x(θ1) y(θ2) correction of the group law
    _, linear = g["z"].split("theta2")
    assert not substitute({"theta1": ring.zero()}, linear, ring).is_zero()
    assert not linear.split("theta1")[1].is_zero()


def test_general_mc_element_solves_the_curvature():
    F = heisenberg_law()
    alpha, ansatz, free = general_mc_element(F, 2)
    assert free == 6
    assert mc_check(alpha, lie_to_linfty(lie_from_group_law(F)), fiber_form_algebra(ansatz.parameters)[1]).ok
    assert not alpha["z"].split("theta")[1].is_zero()
    assert all(alpha[k].split("theta")[1].is_zero() for k in ("x", "y"))


def test_descent_report_serialises():
    data = descent_mc_bijection(heisenberg_law(), 1).to_dict()
    assert data["ok"]
    assert data["dimension"] == data["descent_dimension"] == data["mc_dimension"] == 3
    assert set(data["generic_connection"]) == {"x", "y", "z"}


def test_descent_is_natural_in_the_parameters():
    target = Algebra((GenSpec("gamma1", 0, ODD), GenSpec("gamma2", 0, ODD)))
    g1, g2 = target.gen("gamma1"), target.gen("gamma2")
    images = {"beta1": g1 + g2, "beta2": g2.scale(3)}
    assert descent_naturality(heisenberg_law(), 2, 2, images).ok
    assert descent_naturality(abelian_law(2), 2, 2, images).ok
