import pytest
from hypothesis import given

from momentangle.complex_core import from_facets, full_mask, vertex_set
from momentangle.errors import BudgetExceeded
from momentangle.generators import random_manifold
from momentangle.hochster import (
    BigradedTable,
    all_subcomplex_betti,
    beta_zk_total,
    hochster_table,
    koszul_oracle,
    theorem_a_bound,
)
from oracles import Oracle
from strategies import complexes

C3 = from_facets([[1, 2], [2, 3], [1, 3]], 3)
C4 = from_facets([[1, 2], [2, 3], [3, 4], [1, 4]], 4)
SIMPLEX = from_facets([[1, 2, 3]], 3)


def test_cache_c4():
    cache = all_subcomplex_betti(C4, 2)
    nonzero = {J: cache.reduced(J).as_dict() for J in range(16) if cache.reduced(J).as_dict()}
    assert nonzero == {
        0: {-1: 1},
        vertex_set([1, 3]): {0: 1},
        vertex_set([2, 4]): {0: 1},
        full_mask(4): {1: 1},
    }


def test_cache_simplex():
    cache = all_subcomplex_betti(SIMPLEX, 3)
    assert [J for J in range(8) if cache.reduced(J).total] == [0]


def test_tables():
    assert hochster_table(all_subcomplex_betti(C4, 2)).entries == {(0, 0): 1, (1, 2): 2, (2, 4): 1}
    assert hochster_table(all_subcomplex_betti(C4, 2)).single_graded() == {0: 1, 3: 2, 6: 1}
    assert hochster_table(all_subcomplex_betti(C3, 2)).entries == {(0, 0): 1, (1, 3): 1}
    assert hochster_table(all_subcomplex_betti(C3, 2)).single_graded() == {0: 1, 5: 1}


def test_rp2(fixture_complexes):
    K = fixture_complexes["rp2_6"]
    cache = all_subcomplex_betti(K, 2)
    assert beta_zk_total(cache) == 34
    assert int(cache.unreduced_totals().sum()) == 34 + 2**6 - 2
    single = hochster_table(cache).single_graded()
    assert {n: v for n, v in single.items() if n >= 2} == {5: 10, 6: 15, 7: 6, 8: 1, 9: 1}
    assert theorem_a_bound(6, 3) == 34


def test_totals(fixture_complexes):
    expected = {"c4": 4, "c3": 2, "boundary_simplex_3": 2}
    for name, val in expected.items():
        assert beta_zk_total(all_subcomplex_betti(fixture_complexes[name], 2)) == val


def test_koszul_small():
    assert koszul_oracle(SIMPLEX, 2) == BigradedTable({(0, 0): 1})
    for K in (C3, C4):
        assert koszul_oracle(K, 2) == hochster_table(all_subcomplex_betti(K, 2))
    with pytest.raises(BudgetExceeded):
        koszul_oracle(random_manifold(7), 2)


def test_budget():
    K = random_manifold(10)
    with pytest.raises(BudgetExceeded):
        all_subcomplex_betti(K, 2, m_cap=9)


@given(complexes(max_m=6))
def test_koszul_matches(K):
    for p in (2, 3):
        cache = all_subcomplex_betti(K, p)
        table = hochster_table(cache)
        assert koszul_oracle(K, p) == table
        assert table.total == beta_zk_total(cache)
        assert beta_zk_total(cache) + 2**K.m - 2 == int(cache.unreduced_totals().sum())


@given(complexes(max_m=5))
def test_total_matches_oracle(K):
    assert beta_zk_total(all_subcomplex_betti(K, 2)) == Oracle(K.facet_lists(), K.m).beta_zk()


def test_threads_do_not_change_table():
    K = random_manifold(12, seed=5)
    a = all_subcomplex_betti(K, 2, threads=1).table
    b = all_subcomplex_betti(K, 2, threads=4).table
    assert (a == b).all()
