from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from momentangle import _kernels
from momentangle.complex_core import from_facets, full_mask, members, vertex_set
from momentangle.errors import NotPure
from momentangle.field_linalg import identity, matmul, rank
from momentangle.generators import random_manifold
from momentangle.homology import (
    SubcomplexHomology,
    betti_numbers,
    boundary_matrix,
    cohomology_restriction,
    homology_basis,
    induced_map,
    is_closed_homology_manifold,
    is_F_orientable,
)
from oracles import Oracle
from strategies import complexes

C4 = from_facets([[1, 2], [2, 3], [3, 4], [1, 4]], 4)
TRIANGLE = from_facets([[1, 2, 3]], 3)
BOUNDARY_TET = from_facets([list(c) for c in combinations(range(1, 5), 3)], 4)


def test_boundary_examples():
    D = boundary_matrix(TRIANGLE, 2, 3)
    # rows are the edges 12, 13, 23
    assert D[:, 0].tolist() == [1, 2, 1]
    D = boundary_matrix(C4, 1, 2)
    assert D.shape == (4, 4)
    assert (D.sum(axis=0) == 2).all()


def test_betti_examples(fixture_complexes):
    b = betti_numbers(fixture_complexes["rp2_6"], 2)
    assert b.as_dict() == {0: 1, 1: 1, 2: 1} and b.total == 3
    assert betti_numbers(C4, 2, reduced=True, J=0).as_dict() == {-1: 1}
    assert betti_numbers(C4, 2).as_dict() == {0: 1, 1: 1}
    assert betti_numbers(fixture_complexes["rp2_6"], 3).as_dict() == {0: 1}


def test_basis_examples():
    hb = homology_basis(C4, 1, 2)
    assert hb.dim == 1 and hb.representatives[:, 0].tolist() == [1, 1, 1, 1]
    hb = homology_basis(BOUNDARY_TET, 2, 2)
    assert hb.dim == 1 and hb.representatives[:, 0].tolist() == [1, 1, 1, 1]
    point = from_facets([[1]], 1)
    assert homology_basis(point, 0, 2, reduced=True).dim == 0


def test_induced_examples():
    J = vertex_set([1, 3])
    M = induced_map(C4, J, full_mask(4), 0, 2)
    assert M.tolist() == [[1, 1]]
    assert np.array_equal(induced_map(C4, J, J, 0, 2), identity(2))
    R = cohomology_restriction(C4, J, full_mask(4), 0, 2)
    assert R.tolist() == [[1], [1]] and rank(R, 2) == 1
    assert np.array_equal(cohomology_restriction(C4, J, J, 0, 3), identity(2))


def test_gates(fixture_complexes):
    rp2 = fixture_complexes["rp2_6"]
    assert is_F_orientable(rp2, 2) and not is_F_orientable(rp2, 3)
    for p in (2, 3, 5):
        assert is_F_orientable(BOUNDARY_TET, p)
        assert is_closed_homology_manifold(BOUNDARY_TET, p)
    assert not is_closed_homology_manifold(TRIANGLE, 2)
    for name in ("torus7", "torus9", "c3", "c4", "rp2_6"):
        assert is_closed_homology_manifold(fixture_complexes[name], 2)
    mixed = from_facets([[1, 2, 3], [3, 4]], 4)
    with pytest.raises(NotPure):
        is_F_orientable(mixed, 2)
    assert not is_closed_homology_manifold(mixed, 2)
    # two triangles sharing a vertex: the link of that vertex is not a circle
    bowtie = from_facets([[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4],
                          [4, 5, 6], [4, 5, 7], [4, 6, 7], [5, 6, 7]], 7)
    assert not is_closed_homology_manifold(bowtie, 2)


@given(complexes(), st.sampled_from([2, 3, 5]))
def test_boundary_squares_to_zero(K, p):
    for q in range(0, K.dim + 1):
        d1 = boundary_matrix(K, q, p, reduced=True)
        d2 = boundary_matrix(K, q + 1, p, reduced=True)
        assert not matmul(d1, d2, p).any()


@given(complexes(), st.sampled_from([2, 3]))
def test_euler_poincare(K, p):
    b = betti_numbers(K, p)
    assert sum((-1) ** q * v for q, v in b.as_dict().items()) == K.euler_characteristic()


@given(complexes(), st.sampled_from([2, 3]))
def test_kernel_matches_subquotient(K, p):
    eng = SubcomplexHomology(K, p)
    top = full_mask(K.m)
    for J in range(0, top + 1, max(1, top // 7)):
        b = betti_numbers(K, p, reduced=True, J=J)
        for q in range(-1, K.dim + 1):
            assert eng.basis(J, q, reduced=True).dim == b[q]


@given(complexes(max_m=5))
def test_betti_matches_oracle(K):
    o = Oracle(K.facet_lists(), K.m)
    for J in range(1 << K.m):
        b = betti_numbers(K, 2, reduced=True, J=J)
        for q in range(-1, K.dim + 1):
            assert b[q] == o.reduced_betti(members(J), q)


@given(complexes(max_m=5), st.sampled_from([2, 3]), st.integers(0, 2**32 - 1))
def test_induced_functorial(K, p, seed):
    rng = np.random.default_rng(seed)
    eng = SubcomplexHomology(K, p)
    top = full_mask(K.m)
    M = top
    L = M & int(rng.integers(0, top + 1))
    J = L & int(rng.integers(0, top + 1))
    for q in range(K.dim + 1):
        direct = eng.induced(J, M, q)
        composed = matmul(eng.induced(L, M, q), eng.induced(J, L, q), p)
        assert np.array_equal(direct, composed)


@pytest.mark.parametrize("seed", range(4))
def test_poincare_duality(seed):
    for K in (random_manifold(9, seed=seed), random_manifold(8, seed=seed, dim=3)):
        b = betti_numbers(K, 3)
        n = K.dim
        assert is_closed_homology_manifold(K, 3) and is_F_orientable(K, 3)
        for q in range(n + 1):
            assert b[q] == b[n - q]


def test_numpy_kernel_agrees(fixture_complexes):
    from momentangle.complex_core import ordered_subsets

    for K in fixture_complexes.values():
        t = K.face_table
        subs = ordered_subsets(K.m)
        for p in (2, 3):
            a = _kernels.subset_betti(t.masks, t.dim_start, t.bnd, subs, p, impl=_kernels._subset_betti_loop)
            b = _kernels.subset_betti(t.masks, t.dim_start, t.bnd, subs, p, impl=_kernels._subset_betti_np)
            c = _kernels.subset_betti(t.masks, t.dim_start, t.bnd, subs, p, threads=3)
            assert np.array_equal(a, b) and np.array_equal(a, c)
