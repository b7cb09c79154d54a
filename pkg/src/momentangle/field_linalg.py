"""Exact dense linear algebra over prime fields GF(p).

Matrices are plain ``numpy.int64`` arrays with entries in ``[0, p)``.  The
field is passed alongside as an ``int`` (or a :class:`PrimeField`).  For
``p == 2`` elimination runs on rows packed 64 entries per ``uint64`` word.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DependentColumns, NotACycle, NotInImage, NotPrime

_INT64_SAFE = 2**62


@lru_cache(maxsize=None)
def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not 2 <= self.p < 2**31 or not _is_prime(int(self.p)):
            raise NotPrime(f"{self.p} is not a prime in [2, 2^31)")

    def __int__(self):
        return int(self.p)


def check_prime(p):
    """Validate ``p`` and return it as a plain int."""
    return int(PrimeField(int(p)))


def as_matrix(M, p, shape=None):
    a = np.asarray(M, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return np.mod(a, p)


def zeros(rows, cols):
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n):
    return np.eye(n, dtype=np.int64)


def matmul(A, B, p):
    """``A @ B`` reduced mod ``p``; falls back to Python ints when int64 could overflow."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.shape[1] * (p - 1) ** 2 < _INT64_SAFE:
        return (A @ B) % p
    C = A.astype(object) @ B.astype(object)
    return np.asarray(C % p, dtype=np.int64)


def pack_gf2(M):
    """Pack a 0/1 matrix into rows of uint64 words (column c at bit c % 64)."""
    M = np.asarray(M, dtype=np.uint8) & 1
    rows, cols = M.shape
    nw = max(1, (cols + 63) // 64)
    padded = np.zeros((rows, nw * 64), dtype=np.uint8)
    padded[:, :cols] = M
    weights = np.left_shift(np.uint64(1), np.arange(64, dtype=np.uint64))
    blocks = padded.reshape(rows, nw, 64).astype(np.uint64)
    return (blocks * weights).sum(axis=2, dtype=np.uint64)


def unpack_gf2(words, cols):
    rows, nw = words.shape
    shifts = np.arange(64, dtype=np.uint64)
    bits = (words[:, :, None] >> shifts) & np.uint64(1)
    return bits.reshape(rows, nw * 64)[:, :cols].astype(np.int64)


def rref(M, p):
    """Reduced row-echelon form.

    Returns ``(rank, pivot_columns, R)``.  Pivots are chosen as the leftmost
    column with a nonzero entry at or below the current row, topmost such row.
    """
    if p == 2:
        return rref_gf2(M)
    R = as_matrix(M, p).copy()
    if R.size == 0:
        return 0, [], R
    pivots = _kernels.gfp_rref(R, p)
    return len(pivots), [int(c) for c in pivots], R


def rref_gf2(M, impl=None):
    M = np.asarray(M, dtype=np.int64) & 1
    rows, cols = M.shape
    if M.size == 0:
        return 0, [], M.copy()
    words = pack_gf2(M)
    pivots = (impl or _kernels.gf2_rref_packed)(words, cols)
    return len(pivots), [int(c) for c in pivots], unpack_gf2(words, cols)


def rank(M, p):
    return rref(M, p)[0]


def kernel_basis(M, p):
    """Columns form a basis of the null space of ``M``.

    One basis vector per non-pivot column ``f``: entry 1 at ``f`` and
    ``-R[i, f]`` at the pivot column of row ``i``.
    """
    M = as_matrix(M, p)
    cols = M.shape[1]
    r, pivots, R = rref(M, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    K = zeros(cols, len(free))
    for j, f in enumerate(free):
        K[f, j] = 1
        for i, c in enumerate(pivots):
            K[c, j] = (-R[i, f]) % p
    return K


def solve(A, Y, p):
    """Return ``X`` with ``A @ X == Y`` (mod p); raise NotInImage when inconsistent.

    Uses the deterministic RREF, so free variables are set to zero.
    """
    A = as_matrix(A, p)
    Y = as_matrix(Y, p)
    n = A.shape[1]
    if Y.shape[0] != A.shape[0]:
        raise ValueError("row mismatch")
    if Y.shape[1] == 0:
        return zeros(n, 0)
    aug = np.concatenate([A, Y], axis=1)
    r, pivots, R = rref(aug, p)
    X = zeros(n, Y.shape[1])
    for i, c in enumerate(pivots):
        if c >= n:
            raise NotInImage("right-hand side not in the column space")
        X[c] = R[i, n:]
    return X


class ColumnSpace:
    """Deterministic basis of ``col(M)`` plus coordinates with respect to it."""

    def __init__(self, M, p):
        self.p = p
        M = as_matrix(M, p)
        _, pivots, _ = rref(M, p)
        self.pivots = pivots
        self.basis = M[:, pivots].copy()

    @property
    def dim(self):
        return self.basis.shape[1]

    def express(self, v):
        v = np.asarray(v, dtype=np.int64)
        col = v.reshape(-1, 1) if v.ndim == 1 else v
        X = solve(self.basis, col, self.p)
        return X[:, 0] if v.ndim == 1 else X


def image_and_coordinates(M, p):
    """``(image_basis, express)``; ``express`` raises NotInImage off the image."""
    space = ColumnSpace(M, p)
    return space.basis, space.express


def inverse(A, p):
    A = as_matrix(A, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    return solve(A, identity(n), p)


def quotient_basis(sub, ambient_dim, p):
    """Projection onto ``GF(p)^ambient_dim / span(sub)`` and a section of it.

    The columns of ``sub`` are extended to a basis with standard vectors
    (pivot rule on ``[sub | I]``); ``proj`` is the complementary block of the
    inverse change of basis and ``lift`` the chosen standard vectors.
    """
    sub = as_matrix(sub, p, shape=None if np.ndim(sub) == 2 else (ambient_dim, 0))
    s = sub.shape[1]
    if sub.shape[0] != ambient_dim:
        raise ValueError("sub lives in the wrong ambient space")
    r, pivots, _ = rref(np.concatenate([sub, identity(ambient_dim)], axis=1), p)
    if sum(1 for c in pivots if c < s) < s:
        raise DependentColumns("columns of sub are linearly dependent")
    comp = [c - s for c in pivots if c >= s]
    lift = identity(ambient_dim)[:, comp]
    basis = np.concatenate([sub, lift], axis=1)
    inv = inverse(basis, p)
    proj = inv[s:, :].copy()
    return proj, lift


class Subquotient:
    """``ker(d_out) / im(d_in)`` at one node of a (co)chain complex.

    ``d_in`` maps into the node, ``d_out`` out of it.  Representatives are the
    kernel basis vectors picked as pivots of ``[d_in | Z]`` beyond ``d_in``.
    """

    def __init__(self, d_in, d_out, p):
        self.p = p
        d_in = np.asarray(d_in, dtype=np.int64)
        d_out = np.asarray(d_out, dtype=np.int64)
        self.size = d_in.shape[0]
        if d_out.shape[1] != self.size:
            raise ValueError("incompatible differentials")
        self.d_out = d_out
        Z = kernel_basis(d_out, p)
        nb = d_in.shape[1]
        _, pivots, _ = rref(np.concatenate([d_in, Z], axis=1), p)
        bpiv = [c for c in pivots if c < nb]
        zpiv = [c - nb for c in pivots if c >= nb]
        self.boundaries = d_in[:, bpiv].copy()
        self.representatives = Z[:, zpiv].copy()
        self._frame = np.concatenate([self.boundaries, self.representatives], axis=1)

    @property
    def dim(self):
        return self.representatives.shape[1]

    def coordinates(self, chains):
        """Class coordinates of cycle columns; NotACycle for non-cycles."""
        chains = np.asarray(chains, dtype=np.int64) % self.p
        col = chains.reshape(-1, 1) if chains.ndim == 1 else chains
        if col.shape[1] and matmul(self.d_out, col, self.p).any():
            raise NotACycle("chain is not a cycle")
        X = solve(self._frame, col, self.p)[self.boundaries.shape[1]:]
        return X[:, 0] if chains.ndim == 1 else X
