import random

from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from simptree.generators import random_intersection_property_tree, random_rooted_tree, random_simplicial_tree
from simptree.homology import FieldSpec, graded_betti, has_linear_resolution, lcm_lattice_degrees, strand_euler_check
from simptree.monomial import (
    Monomial,
    MonomialIdeal,
    colon_by_monomial,
    ideal_power,
    ideal_product,
    minimalize,
)
from simptree.rooted import alpha_bound, clean_form, reg_recursive, t_path_ideal, t_paths
from simptree.simplicial import SimplicialComplex


@st.composite
def ideals(draw, max_vars=4, max_exp=2, max_gens=4):
    n = draw(st.integers(1, max_vars))
    exps = st.tuples(*[st.integers(0, max_exp)] * n).filter(any)
    gens = draw(st.lists(exps, min_size=1, max_size=max_gens))
    return MonomialIdeal.from_tuples(gens, n)


@st.composite
def monomial_for(draw, n, max_exp=2):
    return Monomial(tuple(draw(st.integers(0, max_exp)) for _ in range(n)))


@st.composite
def complexes(draw, max_facets=5, max_vertices=6):
    """Arbitrary inclusion-maximal facet lists, not necessarily forests."""
    n = draw(st.integers(2, max_vertices))
    facet = st.frozensets(st.integers(1, n), min_size=1, max_size=min(n, 4))
    fs = draw(st.lists(facet, min_size=1, max_size=max_facets, unique=True))
    fs = [f for f in fs if not any(f < g for g in fs)]
    return SimplicialComplex.from_facets([sorted(f) for f in fs])


seeds = st.integers(0, 10 ** 9)


@given(ideals())
def test_minimalize_idempotent(I):
    assert minimalize(list(I.generators), I.ambient_size) == I
    for a in I.generators:
        for b in I.generators:
            assert a == b or not a.divides(b)


@given(ideals(max_vars=3, max_gens=3), st.integers(1, 2), st.integers(1, 2))
def test_power_product_law(I, a, b):
    assert ideal_product(ideal_power(I, a), ideal_power(I, b)) == ideal_power(I, a + b)


@given(st.data())
def test_colon_undoes_product(data):
    I = data.draw(ideals())
    m = data.draw(monomial_for(I.ambient_size))
    principal = MonomialIdeal.from_tuples([m.exponents], I.ambient_size)
    assert colon_by_monomial(ideal_product(I, principal), m) == I


@given(ideals(max_vars=4, max_exp=2, max_gens=4))
def test_betti_routes_agree_with_naive(I):
    auto = graded_betti(I)
    assert auto == graded_betti(I, route="koszul")
    assert auto.entries == oracles.betti(I.tuples)
    assert sum(v for (i, _), v in auto.items if i == 0) == len(I)


@given(ideals(max_vars=4, max_exp=2, max_gens=4))
def test_strand_euler(I):
    for b in lcm_lattice_degrees(I):
        assert strand_euler_check(I, b)


@given(seeds)
def test_forest_ideals_characteristic_free(seed):
    cx = random_simplicial_tree(random.Random(seed), 5, 2, mode="forest")
    I = cx.facet_ideal()
    assert graded_betti(I) == graded_betti(I, FieldSpec(32003)) == graded_betti(I, FieldSpec(2))


@given(complexes())
def test_greedy_forest_recognition_matches_permutation_search(cx):
    facets = [cx.external(f) for f in cx.facets]
    assert cx.is_forest() == oracles.is_forest(facets)
    order = cx.good_leaf_order()
    if order is not None:
        assert cx.is_good_leaf_order(order)


@given(seeds, st.sampled_from(["tree", "forest", "pure"]))
def test_generator_builds_forests(seed, mode):
    cx = random_simplicial_tree(random.Random(seed), 6, 3, mode=mode)
    assert cx.is_forest()


@given(seeds)
def test_unique_irredundant_chains(seed):
    cx = random_intersection_property_tree(random.Random(seed), 5, 2)
    facets = [set(cx.external(f)) for f in cx.facets]
    for a in range(len(facets)):
        for b in range(len(facets)):
            chains = oracles.irredundant_chains(facets, facets[a], facets[b])
            assert len(chains) == 1
            got = cx.irredundant_proper_chain(a, b)
            assert [set(cx.external(cx.facets[k])) for k in got] == chains[0]
            assert cx.distance(a, b) == len(chains[0]) - 1


@given(seeds)
def test_intersection_property_gives_linear_resolution(seed):
    cx = random_intersection_property_tree(random.Random(seed), 5, 3)
    assert has_linear_resolution(cx.facet_ideal())
    order = cx.adjacent_good_leaf_order()
    assert cx.is_good_leaf_order(order) and cx.ordering_consequences_check(order)


@st.composite
def rooted_trees(draw, max_n=9):
    rng = random.Random(draw(seeds))
    return random_rooted_tree(rng, draw(st.integers(1, max_n)))


@given(rooted_trees(), st.integers(1, 4))
def test_recursion_matches_oracle(G, t):
    I = t_path_ideal(G, t)
    want = 0 if I.is_zero() else graded_betti(I).quotient_regularity()
    assert reg_recursive(G, t) == want


@given(rooted_trees(), st.integers(2, 4), st.data())
def test_recursion_monotone_under_induced_subforests(G, t, data):
    keep = data.draw(st.lists(st.sampled_from(range(G.n)), unique=True))
    H = G.induced(keep) if keep else None
    if H is not None:
        assert reg_recursive(H, t) <= reg_recursive(G, t)


@given(rooted_trees(), st.integers(2, 4))
def test_clean_form_keeps_the_path_ideal(G, t):
    C = clean_form(G, t)
    assert clean_form(C, t).parent == C.parent
    assert reg_recursive(C, t) == reg_recursive(G, t)
    paths = {frozenset(G.labels[v] for v in p) for p in t_paths(G, t)}
    assert paths == {frozenset(C.labels[v] for v in p) for p in t_paths(C, t)}


@given(rooted_trees(), st.integers(2, 4))
def test_alpha_dominates(G, t):
    assume(G.height >= t - 1)
    assert alpha_bound(G, t) >= reg_recursive(G, t)
