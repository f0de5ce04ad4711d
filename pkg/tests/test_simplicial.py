from itertools import product

import pytest

from superjets.errors import PreconditionError, SchemaError
from superjets.simplicial import (
    PointedFiniteSet,
    cyclic_group,
    delta_simplex,
    descent_count,
    discrete,
    from_explicit,
    from_functions,
    g_chain,
    group_from_table,
    hom_enumerate,
    horn_fillers,
    horn_of,
    horn_set,
    is_kan,
    is_truncated,
    klein_group,
    nerve_group,
    pair_filtration,
    pair_nerve,
    pull_back_chain_element,
    pull_back_morphism,
    restrict_to_chain,
)

GROUPS = [cyclic_group(1), cyclic_group(2), cyclic_group(3), cyclic_group(4), klein_group()]


def pointed(size):
    return PointedFiniteSet(("*",) + tuple(f"s{i}" for i in range(1, size)), "*")


def test_nerve_sizes():
    assert nerve_group(cyclic_group(2)).sizes() == [1, 2, 4, 8]
    assert nerve_group(klein_group(), m=1).sizes() == [1, 4, 16]


def test_group_nerve_is_kan_and_two_truncated():
    X = nerve_group(cyclic_group(3))
    assert is_kan(X).ok
    assert is_truncated(X, 2).ok
    verdict = is_truncated(X, 1)
    assert not verdict.ok
    assert verdict.witness["n"] == 1
    assert verdict.witness["fillers"] == 3


def test_horn_fillers_agree_with_horn_restriction():
    X = nerve_group(cyclic_group(3))
    for x in range(X.size(2)):
        for k in range(3):
            assert x in horn_fillers(X, horn_of(X, 2, k, x))
    assert len(horn_set(X, 2, 1)) == 9


def test_standard_interval_is_not_kan():
    X = delta_simplex(1)
    verdict = is_kan(X)
    assert not verdict.ok
    assert (verdict.witness["n"], verdict.witness["k"]) == (2, 0)


def test_discrete_set_is_kan_and_zero_truncated():
    X = discrete(["a", "b"])
    assert X.sizes() == [2, 2]
    assert is_kan(X).ok
    assert is_truncated(X, 0).ok


def test_horn_range_is_checked():
    X = discrete(["a"])
    with pytest.raises(PreconditionError):
        horn_set(X, 3, 0)
    with pytest.raises(PreconditionError):
        horn_set(X, 1, 2)


def test_explicit_point():
    doc = {"m": 0, "levels": [["v"], ["vv"]], "faces": {"1": [["v"], ["v"]]}, "degeneracies": {"0": [["vv"]]}}
    X = from_explicit(doc)
    assert X.sizes() == [1, 1]
    assert is_kan(X).ok
    with pytest.raises(SchemaError):
        from_explicit({"m": 0, "levels": [["v"], ["vv"]], "faces": {"1": [["w"], ["v"]]}})


def test_simplicial_identities_are_enforced():
    elements = ("a", "b")
    levels = [list(product(elements, repeat=n + 1)) for n in range(3)]

    def face(n, i, s):
        i = n - i if n == 2 else i
        return s[:i] + s[i + 1:]

    def degeneracy(n, i, s):
        return s[: i + 1] + s[i:]

    with pytest.raises(PreconditionError):
        from_functions(1, levels, face, degeneracy)


def test_group_tables_are_validated():
    with pytest.raises(PreconditionError):
        group_from_table(["a", "b"], [["a", "a"], ["a", "b"]])
    G = group_from_table(["e", "g"], [["e", "g"], ["g", "e"]])
    assert G.order == 2
    assert G.identity == 0


def test_pair_filtration_counts():
    S = pointed(2)
    assert len(pair_filtration(S, 1, 1)) == 3
    assert len(pair_filtration(S, 0, 1)) == 1
    assert len(pair_filtration(pointed(3), 1, 1)) == 5


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: f"order{G.order}")
@pytest.mark.parametrize("size", [1, 2, 3])
def test_chain_counts_match_oracle(G, size):
    S = pointed(size)
    X = nerve_group(G)
    chain = g_chain(S, X)
    assert chain.count == descent_count(G, S) == G.order ** (size - 1)
    source = pair_nerve(S, X.m)
    morphisms = hom_enumerate(source, X)
    assert len(morphisms) == chain.count
    assert {restrict_to_chain(S, source, f, X.m) for f in morphisms} == set(chain.levels[X.m])
    assert all(chain.surjective)
    assert all(chain.bijective[1:])


def test_cyclic_three_on_three_points():
    assert g_chain(pointed(3), nerve_group(cyclic_group(3))).count == 9


def test_first_transition_forgets_the_group_elements():
    chain = g_chain(pointed(2), nerve_group(cyclic_group(2)))
    assert chain.sizes == [1, 2, 2, 2]
    assert chain.bijective == [False, True, True]


def test_pair_nerve_target_counts_all_maps():
    T = ("a", "b")
    X = pair_nerve(T)
    assert is_truncated(X, 2).ok
    S = pointed(2)
    chain = g_chain(S, X)
    assert chain.count == len(T) ** len(S)
    assert len(hom_enumerate(pair_nerve(S, X.m), X)) == chain.count


def test_chain_needs_kan_truncated_target():
    with pytest.raises(PreconditionError):
        g_chain(pointed(2), delta_simplex(1))


def test_chain_and_oracle_are_natural_in_the_pointed_set():
    X = nerve_group(cyclic_group(3))
    small, large = pointed(2), pointed(3)
    u = {"*": "*", "s1": "s2"}
    small_chain = g_chain(small, X)
    large_chain = g_chain(large, X)
    pulled = {pull_back_chain_element(g, u, small, large, X.m) for g in large_chain.levels[X.m]}
    assert pulled == set(small_chain.levels[X.m])

    small_source, large_source = pair_nerve(small, X.m), pair_nerve(large, X.m)
    small_maps = set(hom_enumerate(small_source, X))
    for f in hom_enumerate(large_source, X):
        back = pull_back_morphism(f, u, small, large, small_source, large_source)
        assert back in small_maps
        assert restrict_to_chain(small, small_source, back, X.m) == pull_back_chain_element(
            restrict_to_chain(large, large_source, f, X.m), u, small, large, X.m
        )

    with pytest.raises(PreconditionError):
        pull_back_chain_element(large_chain.levels[X.m][0], {"*": "s1", "s1": "*"}, small, large, X.m)
