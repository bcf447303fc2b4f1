import pytest

import oracles
from simptree.errors import PreconditionError, ResourceError, StructuralError
from simptree.homology import (
    BettiTable,
    FieldSpec,
    OracleCaps,
    graded_betti,
    has_linear_first_syzygies,
    has_linear_quotients,
    has_linear_resolution,
    koszul_face_counts,
    lcm_lattice_degrees,
    linear_quotient_order,
    quotient_regularity,
    regularity,
)
from simptree.monomial import Monomial, MonomialIdeal, ideal_power
from simptree.suites import letters_ideal, sturmfels_generators, sturmfels_ideal, terai_ideal

PATH3 = MonomialIdeal.from_supports([[0, 1], [1, 2], [2, 3]], 4)
PAIR = MonomialIdeal.from_supports([[0, 1], [1, 2]], 3)
GAP = MonomialIdeal.from_supports([[0, 1], [2, 3]], 4)


def test_lattice_small():
    assert {m.exponents for m in lcm_lattice_degrees(PAIR)} == {(1, 1, 0), (0, 1, 1), (1, 1, 1)}
    assert len(lcm_lattice_degrees(MonomialIdeal.from_tuples([(1,)]))) == 1


def test_lattice_terai():
    L = lcm_lattice_degrees(terai_ideal())
    assert len(L) <= 2 ** 10 and len(set(L)) == len(L)


def test_two_variables():
    t = graded_betti(MonomialIdeal.from_tuples([(1, 0), (0, 1)]))
    assert t.entries == {(0, 1): 2, (1, 2): 1}
    assert regularity(MonomialIdeal.from_tuples([(1, 0), (0, 1)])) == 1


def test_path_edge_ideal_linear():
    t = graded_betti(PATH3)
    assert all(j == i + 2 for (i, j) in t.entries)
    assert t.entries == oracles.betti(PATH3.tuples)


def test_short_path_quotient_reg():
    assert quotient_regularity(MonomialIdeal.from_supports([[0, 1], [1, 2]], 3)) == 1


def test_zero_and_unit():
    assert graded_betti(MonomialIdeal.zero(3)).is_empty()
    assert regularity(MonomialIdeal.zero(3)) == 1
    assert quotient_regularity(MonomialIdeal.zero(3)) == 0
    with pytest.raises(PreconditionError):
        graded_betti(MonomialIdeal.unit(3))


def test_terai_characteristic_dependence():
    I = terai_ideal()
    t0 = graded_betti(I)
    assert all(j == i + 3 for (i, j) in t0.entries)
    assert has_linear_resolution(I)
    assert not has_linear_resolution(I, FieldSpec(2))
    assert regularity(ideal_power(I, 2)) > 6


def test_sturmfels():
    assert has_linear_quotients(sturmfels_generators())
    assert not has_linear_resolution(ideal_power(sturmfels_ideal(), 2))


def test_linear_resolution_examples():
    assert has_linear_resolution(PAIR)
    assert not has_linear_resolution(GAP)
    with pytest.raises(PreconditionError):
        has_linear_resolution(MonomialIdeal.zero(2))


def test_linear_first_syzygies():
    assert has_linear_first_syzygies(PAIR)
    assert not has_linear_first_syzygies(GAP)
    with pytest.raises(PreconditionError):
        has_linear_first_syzygies(MonomialIdeal.from_supports([[0], [1, 2]], 3))


def test_linear_quotients_examples():
    a, b = Monomial.from_support([0, 1], 4), Monomial.from_support([2, 3], 4)
    assert not has_linear_quotients([a, b])
    assert not has_linear_quotients([b, a])
    assert has_linear_quotients([a])
    with pytest.raises(StructuralError):
        has_linear_quotients([a, a * b])


def test_linear_quotient_order_search():
    assert linear_quotient_order(PATH3) is not None
    assert linear_quotient_order(GAP) is None


def test_routes_and_characteristics_agree():
    I = ideal_power(PATH3, 2)
    auto = graded_betti(I)
    assert auto == graded_betti(I, route="koszul")
    assert auto == graded_betti(I, route="koszul-unreduced")
    assert auto == graded_betti(I, FieldSpec(32003))


def test_lattice_cap():
    with pytest.raises(ResourceError):
        graded_betti(terai_ideal(), route="koszul", caps=OracleCaps(max_lattice=5))


def test_bad_characteristic():
    with pytest.raises(ValueError):
        FieldSpec(4)


def test_face_counts_match_oracle():
    b = Monomial((1, 1, 1, 1))
    counts = koszul_face_counts(PATH3, b)
    # every single removal keeps an edge; the pairs {1,2}, {1,4}, {3,4} leave x3x4, x2x3, x1x2
    assert {d: c for d, c in counts.items() if c} == {-1: 1, 0: 4, 1: 3}


def test_table_serialization():
    t = graded_betti(PATH3)
    assert BettiTable.from_json(t.to_json()) == t
    assert t.to_json() == {"0,2": 3, "1,3": 2}
    lines = t.to_tsv().splitlines()
    assert lines[0].split("\t")[0] == "i"
    assert t.projective_dimension() == 1


def test_non_squarefree_against_oracle():
    gens = [(2, 0, 1), (1, 1, 0), (0, 2, 2)]
    assert graded_betti(MonomialIdeal.from_tuples(gens)).entries == oracles.betti(gens)


def test_letters_helper():
    assert letters_ideal(["ab"])[0].exponents == (1, 1, 0, 0, 0, 0)
