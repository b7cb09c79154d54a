"""Functors on the Boolean lattice 2^[m], their cochain complexes, and double homology.

A functor is stored by its cover edges ``(J, x) -> F(J) -> F(J | x)``; x is a
0-based vertex not in J.  ``C^l`` is the direct sum of ``F(J)`` over
``|J| = l`` with the J summands in lex order, and the differential carries the
sign ``(-1)^{#{j in J : j < x}}`` on the edge ``(J, x)``.
"""

import numpy as np

from .complex_core import bits, full_mask, popcount, subsets_of_size
from .errors import NonCommutingFunctor, NotPure
from .field_linalg import Subquotient, check_prime, identity, matmul, rank, zeros
from .hochster import BigradedTable
from .homology import SubcomplexHomology


def sign_epsilon(J, x):
    """Sign of the cube edge adding 0-based vertex ``x`` to ``J``."""
    if J >> x & 1:
        raise ValueError("x must not lie in J")
    return -1 if popcount(J & ((1 << x) - 1)) % 2 else 1


class PosetFunctor:
    """Finite-dimensional functor on 2^[m] over GF(p), given on cover edges."""

    def __init__(self, m, p, dims, edges, verify=True):
        self.m = m
        self.p = check_prime(p)
        self.dims = np.asarray(dims, dtype=np.int64)
        if self.dims.shape != (1 << m,):
            raise ValueError("dims must have one entry per subset")
        self._edges = edges
        for J in range(1 << m):
            for x in self.missing(J):
                E = self.edge(J, x)
                if E.shape != (self.dims[J | 1 << x], self.dims[J]):
                    raise ValueError(f"edge ({J:#x}, {x}) has shape {E.shape}")
        if verify:
            self.check_commutativity()

    def missing(self, J):
        return [x for x in range(self.m) if not J >> x & 1]

    def edge(self, J, x):
        E = self._edges.get((J, x))
        if E is None:
            return zeros(int(self.dims[J | 1 << x]), int(self.dims[J]))
        return E

    def map(self, J, L):
        """Composite F(J -> L) along the chain adding vertices in increasing order."""
        if J & ~L:
            raise ValueError("J must lie inside L")
        M = identity(int(self.dims[J]))
        cur = J
        for x in bits(L & ~J):
            M = matmul(self.edge(cur, x), M, self.p)
            cur |= 1 << x
        return M

    def squares(self):
        for J in range(1 << self.m):
            free = self.missing(J)
            for a in range(len(free)):
                for b in range(a + 1, len(free)):
                    yield J, free[a], free[b]

    def check_commutativity(self, sample=None, rng=None):
        """Raise NonCommutingFunctor on the first failing square.

        With ``sample`` set, only that many randomly chosen squares are checked.
        """
        squares = self.squares()
        if sample is not None:
            squares = list(squares)
            rng = rng or np.random.default_rng(0)
            if len(squares) > sample:
                pick = rng.choice(len(squares), size=sample, replace=False)
                squares = [squares[i] for i in sorted(pick)]
        p = self.p
        for J, x, y in squares:
            left = matmul(self.edge(J | 1 << x, y), self.edge(J, x), p)
            right = matmul(self.edge(J | 1 << y, x), self.edge(J, y), p)
            if not np.array_equal(left, right):
                raise NonCommutingFunctor(J, x, y)


class CochainComplex:
    """``C^0 -> C^1 -> ... -> C^m`` with ``d[l] : C^l -> C^{l+1}``."""

    def __init__(self, p, block_dims, differentials, summands=None, offsets=None):
        self.p = p
        self.block_dims = list(block_dims)
        self.d = differentials
        self.summands = summands
        self.offsets = offsets

    def differential(self, l):
        if 0 <= l < len(self.d):
            return self.d[l]
        rows = self.block_dims[l + 1] if 0 <= l + 1 < len(self.block_dims) else 0
        cols = self.block_dims[l] if 0 <= l < len(self.block_dims) else 0
        return zeros(rows, cols)

    def node(self, l):
        """Subquotient ``ker d^l / im d^{l-1}``."""
        return Subquotient(self.differential(l - 1), self.differential(l), self.p)

    def is_complex(self):
        return all(not matmul(self.d[l + 1], self.d[l], self.p).any() for l in range(len(self.d) - 1))


def cochain_complex(F, check=True):
    """C*(F); ``check`` verifies square commutativity and d^2 = 0."""
    if check:
        F.check_commutativity()
    m, p = F.m, F.p
    summands, offsets, block_dims = [], [], []
    for l in range(m + 1):
        Js = subsets_of_size(m, l)
        off, pos = {}, 0
        for J in Js:
            off[J] = pos
            pos += int(F.dims[J])
        summands.append(Js)
        offsets.append(off)
        block_dims.append(pos)
    d = []
    for l in range(m):
        D = zeros(block_dims[l + 1], block_dims[l])
        for J in summands[l]:
            dj = int(F.dims[J])
            if not dj:
                continue
            c0 = offsets[l][J]
            for x in F.missing(J):
                L = J | 1 << x
                dl = int(F.dims[L])
                if not dl:
                    continue
                r0 = offsets[l + 1][L]
                E = F.edge(J, x)
                if sign_epsilon(J, x) < 0:
                    E = (-E) % p
                D[r0:r0 + dl, c0:c0 + dj] = (D[r0:r0 + dl, c0:c0 + dj] + E) % p
        d.append(D)
    C = CochainComplex(p, block_dims, d, summands, offsets)
    if check and not C.is_complex():
        raise AssertionError("d^2 != 0 for a commuting functor")
    return C


def cohomology_dims(C):
    """``[dim H^0, ..., dim H^m]``."""
    out = []
    for l in range(len(C.block_dims)):
        out.append(C.block_dims[l] - rank(C.differential(l), C.p) - rank(C.differential(l - 1), C.p))
    return out


def functor_cohomology(F, check=True):
    return cohomology_dims(cochain_complex(F, check=check))


def diagonal_functor(dim, m, p):
    edges = {}
    I = identity(dim)
    for J in range(1 << m):
        for x in range(m):
            if not J >> x & 1:
                edges[(J, x)] = I
    return PosetFunctor(m, p, np.full(1 << m, dim), edges, verify=False)


def face_functor(K, p):
    """F_K: one generator on each face of K, identity along face inclusions."""
    m = K.m
    dims = np.array([1 if J in K else 0 for J in range(1 << m)])
    edges = {}
    one = identity(1)
    for J in range(1 << m):
        if dims[J]:
            for x in range(m):
                if not J >> x & 1 and dims[J | 1 << x]:
                    edges[(J, x)] = one
    return PosetFunctor(m, p, dims, edges, verify=False)


def homology_functor(K, q, p, reduced=False, engine=None, verify=True):
    """J -> H_q(K_J) with the maps induced by inclusions."""
    engine = engine or SubcomplexHomology(K, p)
    m = K.m
    dims = np.array([engine.basis(J, q, reduced).dim for J in range(1 << m)])
    edges = {}
    for J in range(1 << m):
        if not dims[J]:
            continue
        for x in range(m):
            L = J | 1 << x
            if L != J and dims[L]:
                edges[(J, x)] = engine.induced(J, L, q, reduced)
    return PosetFunctor(m, engine.p, dims, edges, verify=verify)


def complement_cohomology_functor(K, q, p, engine=None, verify=True):
    """J -> H^{n-q}(K_{J^c}), restriction along K_{(J|x)^c} inside K_{J^c}."""
    if not K.is_pure():
        raise NotPure("complement cohomology functor needs a pure complex")
    engine = engine or SubcomplexHomology(K, p)
    m, n = K.m, K.dim
    deg = n - q
    top = full_mask(m)
    dims = np.array([engine.basis(top & ~J, deg).dim if deg >= 0 else 0 for J in range(1 << m)])
    edges = {}
    for J in range(1 << m):
        if not dims[J]:
            continue
        for x in range(m):
            L = J | 1 << x
            if L != J and dims[L]:
                edges[(J, x)] = engine.restriction(top & ~L, top & ~J, deg)
    return PosetFunctor(m, engine.p, dims, edges, verify=verify)


def complement_dualize(F):
    """G(J) = F(J^c)^*, with G(J -> J|x) the transpose of F(J^c - x -> J^c)."""
    m = F.m
    top = full_mask(m)
    dims = np.array([F.dims[top & ~J] for J in range(1 << m)])
    edges = {}
    for (J, x), E in F._edges.items():
        # F edge (J, x) becomes the G edge at the complement of J | x
        edges[(top & ~(J | 1 << x), x)] = E.T.copy()
    return PosetFunctor(m, F.p, dims, edges, verify=False)


class DoubleHomologyTable(BigradedTable):
    """dim DH_{-k,2l}(Z_K), keyed by (k, l)."""


def double_homology(K, p, engine=None):
    engine = engine or SubcomplexHomology(K, p)
    entries = {}
    for qt in range(-1, K.dim + 1):
        F = homology_functor(K, qt, p, reduced=True, engine=engine, verify=False)
        for l, h in enumerate(functor_cohomology(F, check=False)):
            if h:
                entries[(l - qt - 1, l)] = entries.get((l - qt - 1, l), 0) + h
    return DoubleHomologyTable(entries)


def homology_functor_tables(K, p, reduced=False, engine=None, sample=None, rng=None):
    """``{q: [dim H^l(H_q(K_-)) for l in 0..m]}`` for q in 0..dim (plus -1 when reduced).

    Each functor's squares are checked in full, or ``sample`` of them at random.
    """
    engine = engine or SubcomplexHomology(K, p)
    start = -1 if reduced else 0
    out = {}
    for q in range(start, K.dim + 1):
        F = homology_functor(K, q, p, reduced, engine, verify=False)
        F.check_commutativity(sample=sample, rng=rng)
        out[q] = functor_cohomology(F, check=False)
    return out
