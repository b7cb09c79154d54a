"""Simplicial (co)homology over GF(p): Betti numbers, bases, induced maps, gates."""

import numpy as np

from . import _kernels
from .complex_core import bits, full_mask, link, members
from .errors import NotPure
from .field_linalg import Subquotient, check_prime, zeros


class BettiVector:
    """Betti numbers indexed by degree; zero outside the stored range."""

    def __init__(self, values, start=-1):
        self.start = start
        self.values = tuple(int(v) for v in values)

    def __getitem__(self, q):
        i = q - self.start
        if 0 <= i < len(self.values):
            return self.values[i]
        return 0

    @property
    def total(self):
        return sum(self.values)

    def as_dict(self):
        return {q: v for q, v in enumerate(self.values, start=self.start) if v}

    def __eq__(self, other):
        if not isinstance(other, BettiVector):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __repr__(self):
        return f"BettiVector({self.as_dict()})"


def betti_from_row(row, reduced):
    """Turn a kernel output row (degrees -1..D, reduced) into a BettiVector."""
    row = [int(v) for v in row]
    if reduced:
        return BettiVector(row, start=-1)
    # undo the augmentation: beta_0 = reduced beta_0 + 1 unless empty
    if row[0] == 1:
        return BettiVector([], start=0)
    row = row[1:]
    row[0] += 1
    return BettiVector(row, start=0)


def _face_arrays(K):
    table = K.face_table
    return table.masks, table.dim_start, table.bnd


def betti_numbers(K, p, reduced=False, J=None):
    """Betti vector of K (or of the full subcomplex K_J when ``J`` is given)."""
    p = check_prime(p)
    masks, dim_start, bnd = _face_arrays(K)
    J = K.vertices if J is None else J & K.vertices
    row = _kernels.subset_betti(masks, dim_start, bnd, np.array([J], dtype=np.uint64), p)[0]
    return betti_from_row(row, reduced)


class HomologyBasis:
    """Cycle representatives of H_q in the lex face basis, with class coordinates."""

    def __init__(self, q, faces, subquotient):
        self.q = q
        self.faces = faces
        self.index = {f: i for i, f in enumerate(faces)}
        self._sq = subquotient

    @property
    def representatives(self):
        return self._sq.representatives

    @property
    def dim(self):
        return self._sq.dim

    def coordinates(self, chains):
        return self._sq.coordinates(chains)


class SubcomplexHomology:
    """Homology of the full subcomplexes of one complex, with cached bases.

    Faces of every K_J are filtered from K's lex face lists, so a chain on
    K_J maps into K_L (J inside L) by looking faces up in the bigger basis.
    """

    def __init__(self, K, p):
        self.K = K
        self.p = check_prime(p)
        self._faces = {d: K.faces_of_dim(d) for d in range(K.dim + 1)}
        self._bases = {}

    def faces(self, J, d, reduced):
        if d == -1:
            return [0] if reduced else []
        if d < -1 or d > self.K.dim:
            return []
        return [f for f in self._faces[d] if f & ~J == 0]

    def boundary(self, J, q, reduced):
        rows = self.faces(J, q - 1, reduced)
        cols = self.faces(J, q, reduced)
        D = zeros(len(rows), len(cols))
        if q == 0:
            if rows:
                D[0, :] = 1
            return D
        index = {f: i for i, f in enumerate(rows)}
        neg = self.p - 1
        for j, f in enumerate(cols):
            for t, v in enumerate(bits(f)):
                D[index[f & ~(1 << v)], j] = 1 if t % 2 == 0 else neg
        return D

    def basis(self, J, q, reduced=False):
        key = (J, q, reduced)
        hb = self._bases.get(key)
        if hb is None:
            sq = Subquotient(self.boundary(J, q + 1, reduced), self.boundary(J, q, reduced), self.p)
            hb = HomologyBasis(q, self.faces(J, q, reduced), sq)
            self._bases[key] = hb
        return hb

    def induced(self, J, L, q, reduced=False):
        """Matrix of H_q(K_J) -> H_q(K_L) for J inside L."""
        if J & ~L:
            raise ValueError("induced map needs J inside L")
        src = self.basis(J, q, reduced)
        dst = self.basis(L, q, reduced)
        chains = zeros(len(dst.faces), src.dim)
        for i, f in enumerate(src.faces):
            chains[dst.index[f]] = src.representatives[i]
        return dst.coordinates(chains)

    def restriction(self, J, L, q):
        """Matrix of H^q(K_L) -> H^q(K_J): transpose in the dual bases."""
        return self.induced(J, L, q, reduced=False).T.copy()

    def chain_to_faces(self, J, q, vector, reduced=False):
        """Readable chain: list of (1-based face, coefficient)."""
        faces = self.faces(J, q, reduced)
        return [(members(faces[i]), int(c)) for i, c in enumerate(vector) if c]


def boundary_matrix(K, q, p, reduced=False):
    return SubcomplexHomology(K, p).boundary(K.vertices, q, reduced)


def homology_basis(K, q, p, reduced=False):
    return SubcomplexHomology(K, p).basis(K.vertices, q, reduced)


def induced_map(K, J, L, q, p, reduced=False):
    return SubcomplexHomology(K, p).induced(J, L, q, reduced)


def cohomology_restriction(K, J, L, q, p):
    return SubcomplexHomology(K, p).restriction(J, L, q)


def is_F_orientable(K, p):
    if not K.is_pure():
        raise NotPure("orientability needs a pure complex")
    return betti_numbers(K, p)[K.dim] > 0


def _is_sphere_betti(b, d):
    return b.as_dict() == {d: 1}


def is_closed_homology_manifold(K, p):
    """Pure, and every nonempty face link has the GF(p)-homology of a sphere of the right dimension."""
    if not K.facets or not K.is_pure():
        return False
    n = K.dim
    for d in range(n + 1):
        for sigma in K.faces_of_dim(d):
            lk = link(K, sigma)
            if not _is_sphere_betti(betti_numbers(lk, p, reduced=True), n - d - 1):
                return False
    return True


def full(K):
    return full_mask(K.m) & K.vertices
