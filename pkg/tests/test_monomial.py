import pytest

from simptree.errors import PreconditionError, ResourceError, StructuralError
from simptree.monomial import (
    Monomial,
    MonomialIdeal,
    colon_by_monomial,
    ideal_power,
    ideal_product,
    ideal_sum,
    is_equigenerated,
    minimalize,
)


def M(*e):
    return Monomial(tuple(e))


def ideal(*gens):
    return MonomialIdeal.from_tuples(gens)


def test_minimalize_drops_multiples():
    assert minimalize([M(0, 1), M(1, 1)]).tuples == ((0, 1),)
    assert len(minimalize([M(1, 1, 0), M(0, 1, 1)])) == 2
    assert minimalize([M(0, 0), M(1, 0)]).is_unit()


def test_minimalize_rejects_mixed_ambient():
    with pytest.raises(StructuralError):
        minimalize([M(1, 0), M(1, 0, 0)])


def test_power_of_maximal_ideal():
    assert set(ideal_power(ideal((1, 0), (0, 1)), 2).tuples) == {(2, 0), (1, 1), (0, 2)}


def test_power_of_path_pair():
    I = ideal((1, 1, 0), (0, 1, 1))
    assert set(ideal_power(I, 2).tuples) == {(2, 2, 0), (1, 2, 1), (0, 2, 2)}
    assert ideal_power(I, 1) == I


def test_power_cap():
    I = MonomialIdeal.from_supports([[k, k + 1] for k in range(8)], 9)
    with pytest.raises(ResourceError):
        ideal_power(I, 4, max_gens=10)


def test_colon_examples():
    I = ideal((1, 1, 0), (0, 1, 1))
    assert colon_by_monomial(I, M(0, 0, 1)).tuples == ((0, 1, 0),)
    assert colon_by_monomial(I, M(0, 0, 0)) == I
    assert colon_by_monomial(ideal_power(I, 2), M(0, 1, 1)) == I


def test_sum_examples():
    assert ideal_sum(ideal((1, 0)), ideal((1, 1))).tuples == ((1, 0),)
    assert len(ideal_sum(ideal((1, 0)), ideal((0, 1)))) == 2
    I = ideal((1, 1))
    assert ideal_sum(MonomialIdeal.zero(2), I) == I


def test_product_matches_power():
    I = ideal((1, 1, 0), (0, 1, 1))
    assert ideal_product(I, I) == ideal_power(I, 2)


def test_equigenerated():
    assert is_equigenerated(ideal((1, 1, 0), (0, 1, 1))) == 2
    assert is_equigenerated(ideal((1, 0, 0), (0, 1, 1))) is None
    assert is_equigenerated(ideal((1, 1, 1))) == 3
    with pytest.raises(PreconditionError):
        is_equigenerated(MonomialIdeal.zero(3))


def test_negative_exponent_rejected():
    with pytest.raises(StructuralError):
        M(1, -1)
