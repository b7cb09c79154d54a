import numpy as np
import pytest
from hypothesis import given, strategies as st

from momentangle import _kernels
from momentangle.errors import DependentColumns, NotACycle, NotInImage, NotPrime
from momentangle.field_linalg import (
    PrimeField,
    Subquotient,
    check_prime,
    identity,
    image_and_coordinates,
    inverse,
    kernel_basis,
    matmul,
    pack_gf2,
    quotient_basis,
    rank,
    rref,
    rref_gf2,
    solve,
    unpack_gf2,
    zeros,
)

PRIMES = st.sampled_from([2, 3, 5, 7])


def random_matrix(seed, rows, cols, p, density=0.5):
    rng = np.random.default_rng(seed)
    M = rng.integers(0, p, size=(rows, cols))
    return M * (rng.random((rows, cols)) < density)


matrices = st.tuples(st.integers(0, 2**32 - 1), st.integers(0, 12), st.integers(0, 12), PRIMES)


def test_prime_checks():
    assert PrimeField(7).p == 7
    assert check_prime(2) == 2
    for bad in (0, 1, 4, 9, -3):
        with pytest.raises(NotPrime):
            check_prime(bad)


def test_rref_examples():
    assert rref(zeros(0, 5), 3)[0] == 0
    r, piv, R = rref(identity(3), 2)
    assert (r, piv) == (3, [0, 1, 2])
    assert rank([[1, 2], [2, 4]], 5) == 1


def test_kernel_examples():
    assert kernel_basis(identity(4), 3).shape == (4, 0)
    assert kernel_basis(zeros(2, 3), 2).shape == (3, 3)
    K = kernel_basis([[1, 1, 0], [0, 1, 1]], 2)
    assert K.shape == (3, 1)
    assert K[:, 0].tolist() == [1, 1, 1]


def test_image_examples():
    basis, express = image_and_coordinates(identity(3), 5)
    v = np.array([4, 0, 2])
    assert express(v).tolist() == v.tolist()
    _, express0 = image_and_coordinates(zeros(2, 2), 2)
    with pytest.raises(NotInImage):
        express0(np.array([1, 0]))
    # columns (1,0) and (1,1)
    _, express2 = image_and_coordinates(np.array([[1, 0], [1, 1]]).T, 2)
    assert express2(np.array([0, 1])).tolist() == [1, 1]


def test_quotient_examples():
    proj, lift = quotient_basis(zeros(3, 0), 3, 2)
    assert np.array_equal(proj, identity(3))
    proj, lift = quotient_basis(identity(2), 2, 3)
    assert proj.shape == (0, 2)
    proj, lift = quotient_basis(np.array([[1], [1]]), 2, 2)
    assert proj.shape == (1, 2)
    assert not matmul(proj, np.array([[1], [1]]), 2).any()
    assert rank(proj, 2) == 1
    with pytest.raises(DependentColumns):
        quotient_basis(np.array([[1, 1], [0, 0]]), 2, 2)


@given(matrices)
def test_rank_transpose(args):
    seed, r, c, p = args
    M = random_matrix(seed, r, c, p)
    assert rank(M, p) == rank(M.T, p)


@given(matrices)
def test_rank_nullity(args):
    seed, r, c, p = args
    M = random_matrix(seed, r, c, p)
    K = kernel_basis(M, p)
    assert rank(M, p) + K.shape[1] == c
    assert not matmul(M, K, p).any()
    assert rank(K, p) == K.shape[1]


@given(matrices)
def test_rref_is_reduced(args):
    seed, r, c, p = args
    M = random_matrix(seed, r, c, p)
    k, piv, R = rref(M, p)
    assert piv == sorted(piv)
    for i, col in enumerate(piv):
        assert R[i, col] == 1
        assert np.count_nonzero(R[:, col]) == 1
    assert not R[k:].any()
    # same row space
    assert rank(np.vstack([M % p, R]), p) == k


@given(matrices)
def test_solve_roundtrip(args):
    seed, r, c, p = args
    A = random_matrix(seed, r, c, p)
    X = random_matrix(seed + 1, c, 3, p)
    Y = matmul(A, X, p)
    assert np.array_equal(matmul(A, solve(A, Y, p), p), Y)


@given(st.integers(0, 2**32 - 1), st.integers(1, 10), PRIMES)
def test_inverse(seed, n, p):
    rng = np.random.default_rng(seed)
    while True:
        A = rng.integers(0, p, size=(n, n))
        if rank(A, p) == n:
            break
    assert np.array_equal(matmul(A, inverse(A, p), p), identity(n))


@given(matrices)
def test_quotient_properties(args):
    seed, r, c, p = args
    A = random_matrix(seed, r, c, p)
    sub = A[:, rref(A, p)[1]]
    proj, lift = quotient_basis(sub, r, p)
    q = r - sub.shape[1]
    assert proj.shape == (q, r) and lift.shape == (r, q)
    assert not matmul(proj, sub, p).any()
    assert np.array_equal(matmul(proj, lift, p), identity(q))


@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.integers(1, 8), st.integers(1, 8), PRIMES)
def test_subquotient_dimension(seed, a, b, c, p):
    rng = np.random.default_rng(seed)
    d_out = rng.integers(0, p, size=(c, b))
    Z = kernel_basis(d_out, p)
    d_in = matmul(Z, rng.integers(0, p, size=(Z.shape[1], a)), p) if Z.shape[1] else zeros(b, a)
    S = Subquotient(d_in, d_out, p)
    assert S.dim == b - rank(d_out, p) - rank(d_in, p)
    if S.dim:
        eye = S.coordinates(S.representatives)
        assert np.array_equal(eye, identity(S.dim))
        shifted = (S.representatives + d_in.sum(axis=1, keepdims=True)) % p
        assert np.array_equal(S.coordinates(shifted), identity(S.dim))
    if rank(d_out, p):
        bad = np.zeros(b, dtype=np.int64)
        col = next(j for j in range(b) if d_out[:, j].any())
        bad[col] = 1
        with pytest.raises(NotACycle):
            S.coordinates(bad)


@pytest.mark.parametrize("shape", [(1, 1), (7, 130), (64, 64), (65, 3), (200, 513), (512, 512)])
def test_gf2_packed_matches_generic(shape):
    M = random_matrix(sum(shape), *shape, 2, density=0.3)
    r1, p1, R1 = rref_gf2(M)
    R2 = M.copy()
    piv = _kernels._gfp_rref_np(R2, 2)
    assert r1 == len(piv) and p1 == list(piv)
    assert np.array_equal(R1, R2)


def test_pack_roundtrip():
    M = random_matrix(3, 5, 200, 2)
    assert np.array_equal(unpack_gf2(pack_gf2(M), 200), M)


@given(matrices)
def test_loop_and_numpy_kernels_agree(args):
    seed, r, c, p = args
    M = random_matrix(seed, r, c, p)
    a, b = M.copy(), M.copy()
    pa = _kernels._gfp_rref_loop(a, p)
    pb = _kernels._gfp_rref_np(b, p)
    assert list(pa) == list(pb)
    assert np.array_equal(a, b)
    if r and c:
        w1, w2 = pack_gf2(M & 1), pack_gf2(M & 1)
        assert list(_kernels._gf2_rref_loop(w1, c)) == list(_kernels._gf2_rref_np(w2, c))
        assert np.array_equal(w1, w2)


def test_matmul_large_entries():
    p = 2_147_483_647
    A = np.full((3, 3), p - 1)
    assert matmul(A, A, p).tolist() == [[3] * 3] * 3
