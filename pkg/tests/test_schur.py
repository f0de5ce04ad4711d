import pytest
from hypothesis import given, settings

from strategies import young_diagrams
from superjets.errors import PreconditionError, SchemaError
from superjets.schur import (
    EVEN,
    ODD,
    S_SLOTS,
    CharacterSeries,
    character_value,
    closed_forms_dim,
    composition_series,
    hook_content_dim,
    jet_character,
    omega2_character_identity,
    partitions,
    schur_dim,
    ssyt_count,
    tensor_jet_dim,
    tensor_power_dim,
    transpose,
    two_column_diagrams,
    young,
)


def small_diagrams(max_size):
    return [young(rows) for m in range(1, max_size + 1) for rows in partitions(m)]


def test_schur_dimension_examples():
    assert schur_dim(young([1]), 2) == 2
    assert schur_dim(young([1, 1, 1]), 2, ODD) == 4
    assert schur_dim(young([2]), 1, ODD) == 0


def test_tensor_jet_dimension_examples():
    assert tensor_jet_dim(young([1]), 1) == 2
    assert tensor_jet_dim(young([1]), 2) == 8
    assert tensor_jet_dim(young([3]), 2) == 0


def test_diagrams_are_validated():
    with pytest.raises(SchemaError):
        young([1, 2])
    with pytest.raises(SchemaError):
        young([2, 0])
    with pytest.raises(SchemaError):
        schur_dim(young([1]), 2, "neither")
    with pytest.raises(PreconditionError):
        schur_dim(young([1]), -1)


@pytest.mark.parametrize("n", range(5))
def test_three_dimension_formulas_agree(n):
    for diagram in small_diagrams(6):
        expected = ssyt_count(diagram, n)
        assert hook_content_dim(diagram, n) == expected, diagram
        assert tensor_power_dim(diagram, n) == expected, diagram
        assert schur_dim(diagram, n, EVEN) == expected


@pytest.mark.parametrize("n", range(4))
def test_odd_schur_functor_vanishes_exactly_beyond_n_columns(n):
    for diagram in small_diagrams(6):
        assert (schur_dim(diagram, n, ODD) == 0) == (diagram.columns > n), diagram


@settings(max_examples=50, deadline=None)
@given(young_diagrams(max_size=8))
def test_transpose_is_an_involution(diagram):
    assert transpose(transpose(diagram)) == diagram
    assert transpose(diagram).size == diagram.size


def test_symmetric_group_characters():
    hook = young([2, 1])
    assert character_value(hook, (1, 1, 1)) == 2
    assert character_value(hook, (2, 1)) == 0
    assert character_value(hook, (3,)) == -1
    assert character_value(young([1, 1, 1]), (2, 1)) == -1
    with pytest.raises(PreconditionError):
        character_value(hook, (2,))


def test_composition_series_examples():
    assert composition_series(young([2, 1])) == [young([2, 1])]
    assert composition_series(young([2, 2])) == [young([2, 2]), young([3, 1])]
    assert composition_series(young([2, 2, 1])) == [young([2, 2, 1]), young([3, 1, 1])]
    assert composition_series(young([2])) == [young([2])]
    for rows in ([1, 1], [3, 1]):
        with pytest.raises(PreconditionError):
            composition_series(young(rows))


@pytest.mark.parametrize("diagram", two_column_diagrams(8), ids=str)
def test_composition_series_moves_one_square_at_a_time(diagram):
    series = composition_series(diagram)
    assert series[0] == diagram
    assert len(series) == diagram.column_height(2)
    heights = [mu.column_height(2) for mu in series]
    assert heights == list(range(heights[0], 0, -1))
    assert all(mu.size == diagram.size for mu in series)
    assert series[-1].column_height(2) == 1


def test_two_column_diagrams():
    diagrams = two_column_diagrams(4)
    assert set(map(str, diagrams)) == {"[2]", "[2, 1]", "[2, 1, 1]", "[2, 2]"}
    assert all(d.columns == 2 for d in two_column_diagrams(8))


@pytest.mark.parametrize("k", range(6))
def test_closed_forms_on_the_odd_line(k):
    assert closed_forms_dim(k, 1) == 1


def test_closed_forms_on_other_fibers():
    assert closed_forms_dim(1, 2) == 3
    assert closed_forms_dim(0, 0) == 1
    assert closed_forms_dim(1, 0) == 0
    with pytest.raises(PreconditionError):
        closed_forms_dim(-1, 1)


def test_character_series_truncates_in_the_s_variables():
    s1 = CharacterSeries(1, {(0, 0, 1, 0): 1})
    t1 = CharacterSeries(1, {(1, 0, 0, 0): 1})
    assert (s1 * s1).coefficients == {}
    assert (t1 * t1).coefficients == {(2, 0, 0, 0): 1}
    assert (s1 + t1 - s1) == t1
    assert (s1 + t1).dimension(1) == 1
    assert s1.to_dict() == {"s1": 1}


def test_jet_character_dimension_matches_tensor_jet_dim():
    for rows in ([1], [2], [2, 1], [1, 1], [2, 2]):
        diagram = young(rows)
        assert jet_character(diagram, S_SLOTS, 10).dimension() == tensor_jet_dim(diagram, 2)


def test_omega2_decomposition_through_degree_four():
    report = omega2_character_identity(4)
    assert report.calibrated
    assert report.ok, report.verdict.witness
    assert [s["degree"] for s in report.slices] == [0, 1, 2, 3, 4]
    assert report.slices[0]["lhs_dim"] == 1
    assert report.slices[1]["lhs_dim"] == 8
    two = report.slices[2]
    assert two["lhs_dim"] == 32 == two["generic_dim"] + two["quotient_dim"]
    assert report.slices[3]["lhs_dim"] == 88


def test_omega2_needs_positive_truncation():
    with pytest.raises(PreconditionError):
        omega2_character_identity(0)
