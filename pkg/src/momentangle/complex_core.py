"""Finite simplicial complexes on [m].

Vertex sets are ints used as bitmasks: external vertex ``v`` (1-based) is bit
``v - 1``.  Faces inside a full subcomplex keep the labels of the ambient
complex, so chains map back without re-indexing.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import FaceNotInComplex, GhostVertex, VertexOutOfRange

MAX_VERTICES = 64


def vertex_set(vertices):
    """Bitmask of an iterable of 1-based vertex labels."""
    mask = 0
    for v in vertices:
        v = int(v)
        if not 1 <= v <= MAX_VERTICES:
            raise VertexOutOfRange(f"vertex {v} outside 1..{MAX_VERTICES}")
        mask |= 1 << (v - 1)
    return mask


def members(mask):
    """Sorted 1-based labels of a bitmask."""
    return [i + 1 for i in bits(mask)]


def bits(mask):
    """Sorted 0-based bit positions of a bitmask."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask):
    return bin(mask).count("1")


def popcounts(m):
    """Popcount of every mask 0 .. 2^m - 1 as an int64 array."""
    masks = np.arange(1 << m, dtype=np.int64)
    out = np.zeros(1 << m, dtype=np.int64)
    for i in range(m):
        out += (masks >> i) & 1
    return out


def full_mask(m):
    return (1 << m) - 1


def lex_key(mask):
    return tuple(bits(mask))


def ordered_subsets(m):
    """All subsets of [m] as uint64 masks, by cardinality then lex order.

    Within one cardinality, lex order on sorted vertex lists is the same as
    descending order of the bit-reversed mask.
    """
    if m > 30:
        raise ValueError("refusing to enumerate more than 2^30 subsets")
    masks = np.arange(1 << m, dtype=np.uint64)
    pc = np.zeros(masks.shape, dtype=np.int64)
    rev = np.zeros(masks.shape, dtype=np.uint64)
    for i in range(m):
        b = (masks >> np.uint64(i)) & np.uint64(1)
        pc += b.astype(np.int64)
        rev |= b << np.uint64(m - 1 - i)
    order = np.lexsort((-rev.astype(np.int64), pc))
    return masks[order]


def subsets_of_size(m, l):
    """Masks of all l-subsets of [m] in lex order."""
    return [sum(1 << i for i in c) for c in combinations(range(m), l)]


def _antichain(masks):
    masks = sorted(set(masks), key=lambda f: (-popcount(f), lex_key(f)))
    kept = []
    for f in masks:
        if not any(f & g == f for g in kept):
            kept.append(f)
    return kept


@dataclass(frozen=True)
class SimplicialComplex:
    """Facet-encoded complex.

    ``m`` is the size of the ambient label range, ``vertices`` the mask of
    vertices the complex lives on (all of [m] unless it is a full subcomplex
    or a link).  ``facets`` is an antichain sorted lexicographically; the
    complex ``{empty face}`` has no facets.
    """

    m: int
    facets: tuple
    vertices: int

    @classmethod
    def from_masks(cls, facet_masks, m, vertices=None):
        if not 0 <= m <= MAX_VERTICES:
            raise VertexOutOfRange(f"m={m} outside 0..{MAX_VERTICES}")
        ambient = full_mask(m)
        facets = [int(f) for f in facet_masks if int(f)]
        for f in facets:
            if f & ~ambient:
                raise VertexOutOfRange(f"facet {members(f)} not inside 1..{m}")
        facets = sorted(_antichain(facets), key=lex_key)
        covered = 0
        for f in facets:
            covered |= f
        if vertices is None:
            vertices = ambient
        missing = vertices & ~covered
        if missing:
            raise GhostVertex(members(missing)[0])
        if covered & ~vertices:
            raise VertexOutOfRange("facet uses a vertex outside the vertex set")
        return cls(m, tuple(facets), vertices)

    @property
    def dim(self):
        if not self.facets:
            return -1
        return max(popcount(f) for f in self.facets) - 1

    @property
    def n_vertices(self):
        return popcount(self.vertices)

    def is_pure(self):
        return len({popcount(f) for f in self.facets}) <= 1

    def __contains__(self, face):
        return any(face & f == face for f in self.facets) or face == 0

    def faces_of_dim(self, d):
        """Faces with ``d + 1`` vertices, in lex order; ``d = -1`` gives the empty face."""
        if d == -1:
            return [0]
        if d < -1:
            return []
        found = set()
        for f in self.facets:
            vs = bits(f)
            if len(vs) > d:
                for c in combinations(vs, d + 1):
                    found.add(sum(1 << i for i in c))
        return sorted(found, key=lex_key)

    def all_faces(self):
        return [f for d in range(-1, self.dim + 1) for f in self.faces_of_dim(d)]

    def f_vector(self):
        """Face counts f_0, ..., f_dim (the empty face is not listed)."""
        return [len(self.faces_of_dim(d)) for d in range(self.dim + 1)]

    def euler_characteristic(self):
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector()))

    def facet_lists(self):
        return [members(f) for f in self.facets]

    @cached_property
    def face_table(self):
        return FaceTable(self)


def from_facets(facet_list, m):
    """Build a complex on [m] from 1-based facet lists; dominated facets are dropped."""
    masks = []
    for facet in facet_list:
        facet = list(facet)
        if not facet:
            raise ValueError("empty facet")
        for v in facet:
            if not 1 <= int(v) <= m:
                raise VertexOutOfRange(f"vertex {v} outside 1..{m}")
        masks.append(vertex_set(facet))
    return SimplicialComplex.from_masks(masks, m)


def full_subcomplex(K, J):
    """K_J on vertex universe ``J & K.vertices`` (labels unchanged)."""
    J = J & K.vertices
    return SimplicialComplex.from_masks([f & J for f in K.facets], K.m, vertices=J)


def link(K, sigma):
    if sigma == 0 or sigma not in K:
        raise FaceNotInComplex(f"{members(sigma)} is not a nonempty face")
    faces = [f & ~sigma for f in K.facets if f & sigma == sigma]
    cover = 0
    for f in faces:
        cover |= f
    return SimplicialComplex.from_masks(faces, K.m, vertices=cover)


class FaceTable:
    """Flat arrays describing every nonempty face, as consumed by the Betti kernel.

    ``masks[dim_start[d]:dim_start[d+1]]`` are the d-faces in lex order and
    ``bnd[f, t]`` is the global index of the face obtained by deleting the
    t-th smallest vertex of face ``f``.
    """

    def __init__(self, K):
        per_dim = [K.faces_of_dim(d) for d in range(K.dim + 1)]
        self.dim = K.dim
        self.dim_start = np.zeros(len(per_dim) + 1, dtype=np.int64)
        for d, faces in enumerate(per_dim):
            self.dim_start[d + 1] = self.dim_start[d] + len(faces)
        flat = [f for faces in per_dim for f in faces]
        self.masks = np.array(flat, dtype=np.uint64)
        self.index = {f: i for i, f in enumerate(flat)}
        self.bnd = np.full((len(flat), max(K.dim + 1, 1)), -1, dtype=np.int64)
        for d in range(1, K.dim + 1):
            for f in per_dim[d]:
                i = self.index[f]
                for t, v in enumerate(bits(f)):
                    self.bnd[i, t] = self.index[f & ~(1 << v)]
