"""Random closed homology manifolds for stress tests and benchmarks.

Start from a small closed manifold, stellar-subdivide random facets until the
vertex count is reached, then (for surfaces) apply random edge flips.  Both
moves preserve the PL homeomorphism type, so the result is again a closed
manifold of the same topology.
"""

import numpy as np

from .complex_core import SimplicialComplex, bits, full_mask, popcount


def boundary_simplex(n):
    """Boundary of the (n + 1)-simplex: an n-sphere on n + 2 vertices."""
    m = n + 2
    top = full_mask(m)
    return SimplicialComplex.from_masks([top & ~(1 << v) for v in range(m)], m)


def subdivide_facet(K, facet):
    """Stellar subdivision of one facet with a new vertex m + 1."""
    new = 1 << K.m
    facets = [f for f in K.facets if f != facet]
    facets += [(facet & ~(1 << v)) | new for v in bits(facet)]
    return SimplicialComplex.from_masks(facets, K.m + 1)


def _edges(K):
    return set(K.faces_of_dim(1))


def flip_edge(K, edge):
    """Replace triangles abc, abd by acd, bcd when cd is not already an edge."""
    tris = [f for f in K.facets if f & edge == edge]
    if len(tris) != 2:
        return None
    cd = (tris[0] | tris[1]) & ~edge
    if popcount(cd) != 2 or cd in _edges(K):
        return None
    a, b = bits(edge)
    facets = [f for f in K.facets if f not in tris] + [cd | 1 << a, cd | 1 << b]
    return SimplicialComplex.from_masks(facets, K.m)


def random_manifold(m, seed=0, base=None, dim=2, flips=None):
    """Random closed homology manifold on m vertices.

    ``base`` defaults to the boundary of a simplex of dimension ``dim + 1``.
    Vertex labels are shuffled at the end.
    """
    rng = np.random.default_rng(seed)
    K = base if base is not None else boundary_simplex(dim)
    if K.m > m:
        raise ValueError("base complex already has more than m vertices")
    while K.m < m:
        K = subdivide_facet(K, K.facets[rng.integers(len(K.facets))])
    if K.dim == 2:
        for _ in range(flips if flips is not None else 4 * m):
            edges = sorted(_edges(K))
            flipped = flip_edge(K, edges[rng.integers(len(edges))])
            if flipped is not None:
                K = flipped
    perm = rng.permutation(m)
    relabel = [sum(1 << int(perm[v]) for v in bits(f)) for f in K.facets]
    return SimplicialComplex.from_masks(relabel, m)
