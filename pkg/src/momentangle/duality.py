"""Natural transformations of cube functors, snake-lemma maps, and the duality report.

For a closed F-orientable homology n-manifold K and each degree q:

    H_q(K_-) --i_q--> Delta(H_q(K)) --> H^{n-q}(K_{-^c})

The maps out of the diagonal are not built at chain level.  The middle term is
realised as the cokernel of i_q, which gives the connecting isomorphism of the
short exact sequence ``Im i_q -> Delta -> coker`` and hence the map
``eta_q = conn^{-1} i_q^*``.  Its target is then compared with
H^{*-1}(H^{n-q}(K_{-^c})) by dimension.
"""

from dataclasses import dataclass, field

import numpy as np

from .complex_core import full_mask
from .errors import InternalInconsistency, NotASubfunctor
from .field_linalg import ColumnSpace, kernel_basis, matmul, quotient_basis, rank, solve, zeros
from .homology import SubcomplexHomology
from .poset_cohomology import (
    PosetFunctor,
    cochain_complex,
    cohomology_dims,
    complement_cohomology_functor,
    diagonal_functor,
    homology_functor,
)
from .tightness import TIGHT, direct_check, require_manifold


class NaturalTransformation:
    def __init__(self, source, target, components, verify=True):
        if source.m != target.m or source.p != target.p:
            raise ValueError("functors over different cubes or fields")
        self.source = source
        self.target = target
        self.components = components
        for J in range(1 << source.m):
            C = self.component(J)
            if C.shape != (target.dims[J], source.dims[J]):
                raise ValueError(f"component at {J:#x} has shape {C.shape}")
        if verify:
            self.check_naturality()

    def component(self, J):
        C = self.components.get(J)
        if C is None:
            return zeros(int(self.target.dims[J]), int(self.source.dims[J]))
        return C

    def check_naturality(self):
        p = self.source.p
        for J in range(1 << self.source.m):
            for x in self.source.missing(J):
                L = J | 1 << x
                left = matmul(self.component(L), self.source.edge(J, x), p)
                right = matmul(self.target.edge(J, x), self.component(J), p)
                if not np.array_equal(left, right):
                    raise InternalInconsistency(f"naturality fails at J={J:#x}, x={x}")

    def cochain_map(self, CS, CT, l):
        """Block-diagonal matrix C^l(source) -> C^l(target)."""
        M = zeros(CT.block_dims[l], CS.block_dims[l])
        for J in CS.summands[l]:
            s, t = int(self.source.dims[J]), int(self.target.dims[J])
            if s and t:
                r0, c0 = CT.offsets[l][J], CS.offsets[l][J]
                M[r0:r0 + t, c0:c0 + s] = self.component(J)
        return M


def i_q_transformation(K, q, p, engine=None):
    """H_q(K_-) -> Delta(H_q(K)) with components induced by K_J inside K."""
    engine = engine or SubcomplexHomology(K, p)
    source = homology_functor(K, q, p, engine=engine)
    top = full_mask(K.m)
    beta = engine.basis(top, q).dim
    target = diagonal_functor(beta, K.m, p)
    comps = {J: engine.induced(J, top, q) for J in range(1 << K.m) if source.dims[J] and beta}
    return NaturalTransformation(source, target, comps)


def image_subfunctor(t):
    """(Im t, inclusion into the target)."""
    F, G = t.source, t.target
    p = F.p
    spaces = {J: ColumnSpace(t.component(J), p) for J in range(1 << F.m)}
    dims = np.array([spaces[J].dim for J in range(1 << F.m)])
    edges = {}
    for J in range(1 << F.m):
        if not dims[J]:
            continue
        for x in F.missing(J):
            L = J | 1 << x
            if dims[L]:
                pushed = matmul(G.edge(J, x), spaces[J].basis, p)
                edges[(J, x)] = solve(spaces[L].basis, pushed, p)
    Im = PosetFunctor(F.m, p, dims, edges, verify=False)
    incl = NaturalTransformation(Im, G, {J: spaces[J].basis for J in spaces if dims[J]}, verify=False)
    return Im, incl


def kernel_subfunctor(t):
    """(ker t, inclusion into the source)."""
    F = t.source
    p = F.p
    bases = {J: kernel_basis(t.component(J), p) for J in range(1 << F.m)}
    dims = np.array([bases[J].shape[1] for J in range(1 << F.m)])
    edges = {}
    for J in range(1 << F.m):
        if not dims[J]:
            continue
        for x in F.missing(J):
            L = J | 1 << x
            if dims[L]:
                pushed = matmul(F.edge(J, x), bases[J], p)
                edges[(J, x)] = solve(bases[L], pushed, p)
    Ker = PosetFunctor(F.m, p, dims, edges, verify=False)
    incl = NaturalTransformation(Ker, F, {J: bases[J] for J in bases if dims[J]}, verify=False)
    return Ker, incl


def quotient_functor(B, sub):
    """(B / Im, projection) for a subfunctor given as ``(Im, incl)``."""
    Im, incl = sub
    p = B.p
    projs, lifts = {}, {}
    for J in range(1 << B.m):
        projs[J], lifts[J] = quotient_basis(incl.component(J), int(B.dims[J]), p)
    dims = np.array([projs[J].shape[0] for J in range(1 << B.m)])
    edges = {}
    for J in range(1 << B.m):
        for x in B.missing(J):
            L = J | 1 << x
            carried = matmul(projs[L], matmul(B.edge(J, x), incl.component(J), p), p)
            if carried.any():
                raise NotASubfunctor(f"edge ({J:#x}, {x}) leaves the subfunctor")
            if dims[J] and dims[L]:
                edges[(J, x)] = matmul(projs[L], matmul(B.edge(J, x), lifts[J], p), p)
    Q = PosetFunctor(B.m, p, dims, edges, verify=False)
    proj = NaturalTransformation(B, Q, {J: projs[J] for J in projs if dims[J] and B.dims[J]}, verify=False)
    return Q, proj


@dataclass
class FunctorSES:
    """0 -> A --inc--> B --proj--> C -> 0, exact at every J."""

    A: PosetFunctor
    B: PosetFunctor
    C: PosetFunctor
    inc: NaturalTransformation
    proj: NaturalTransformation
    _complexes: dict = field(default_factory=dict, repr=False)

    def validate(self):
        p = self.A.p
        for J in range(1 << self.A.m):
            i, q = self.inc.component(J), self.proj.component(J)
            a, b, c = int(self.A.dims[J]), int(self.B.dims[J]), int(self.C.dims[J])
            if rank(i, p) != a or rank(q, p) != c or a + c != b or matmul(q, i, p).any():
                raise InternalInconsistency(f"sequence not exact at J={J:#x}")
        return self

    def complexes(self):
        if not self._complexes:
            for name in "ABC":
                self._complexes[name] = cochain_complex(getattr(self, name), check=False)
        return self._complexes["A"], self._complexes["B"], self._complexes["C"]


def _induced_on_cohomology(cmap, src_node, dst_node, p):
    if src_node.dim == 0 or dst_node.dim == 0:
        return zeros(dst_node.dim, src_node.dim)
    return dst_node.coordinates(matmul(cmap, src_node.representatives, p))


def connecting_hom(S, l):
    """Matrix of H^l(C) -> H^{l+1}(A) by the snake-lemma zig-zag."""
    p = S.A.p
    CA, CB, CC = S.complexes()
    m = S.A.m
    HC = CC.node(l)
    HA = CA.node(l + 1)
    if not 0 <= l < m or HC.dim == 0 or HA.dim == 0:
        return zeros(HA.dim, HC.dim)
    proj_l = S.proj.cochain_map(CB, CC, l)
    inc_next = S.inc.cochain_map(CA, CB, l + 1)
    b = solve(proj_l, HC.representatives, p)
    db = matmul(CB.differential(l), b, p)
    a = solve(inc_next, db, p)
    return HA.coordinates(a)


def long_exact_sequence(S):
    """Nodes of ... -> H^l(A) -> H^l(B) -> H^l(C) -> H^{l+1}(A) -> ... with map ranks.

    Returns a list of ``(label, dim, rank_in, rank_out)``; exactness means
    ``rank_in + rank_out == dim`` at every node.
    """
    p = S.A.p
    CA, CB, CC = S.complexes()
    m = S.A.m
    maps = []
    for l in range(m + 1):
        nA, nB, nC = CA.node(l), CB.node(l), CC.node(l)
        f = _induced_on_cohomology(S.inc.cochain_map(CA, CB, l), nA, nB, p)
        g = _induced_on_cohomology(S.proj.cochain_map(CB, CC, l), nB, nC, p)
        delta = connecting_hom(S, l)
        maps.append((("A", l), nA.dim, ("B", l), f))
        maps.append((("B", l), nB.dim, ("C", l), g))
        maps.append((("C", l), nC.dim, ("A", l + 1), delta))
    nodes = []
    for i, (label, dim, _, out) in enumerate(maps):
        rin = rank(maps[i - 1][3], p) if i else 0
        nodes.append((label, dim, rin, rank(out, p)))
    return nodes


def is_exact(nodes):
    return all(rin + rout == dim for _, dim, rin, rout in nodes)


def diagonal_sequence(K, q, p, engine=None):
    """The sequences ``ker i_q -> H_q(K_-) -> Im i_q`` and ``Im i_q -> Delta -> coker i_q``."""
    t = i_q_transformation(K, q, p, engine)
    Im, incl = image_subfunctor(t)
    Ker, kincl = kernel_subfunctor(t)
    # H_q(K_-) -> Im i_q: corestriction of t
    corestr = {J: solve(incl.component(J), t.component(J), p)
               for J in range(1 << K.m) if Im.dims[J] and t.source.dims[J]}
    onto_image = NaturalTransformation(t.source, Im, corestr, verify=False)
    first = FunctorSES(Ker, t.source, Im, kincl, onto_image).validate()
    Q, proj = quotient_functor(t.target, (Im, incl))
    second = FunctorSES(Im, t.target, Q, incl, proj).validate()
    return t, first, second


@dataclass
class TheoremBReport:
    p: int
    n: int
    m: int
    lhs: dict
    rhs: dict
    eta_rank: dict
    tight: bool

    def entry_equal(self, q, l):
        return self.lhs[q][l] == self.rhs[q][l]

    @property
    def overall(self):
        return all(self.entry_equal(q, l) for q in self.lhs for l in range(self.m + 1))

    @property
    def verdict(self):
        return "EQUAL" if self.overall else "NOT_EQUAL"

    def nonzero_lhs(self):
        return {(q, l): v for q in sorted(self.lhs) for l, v in enumerate(self.lhs[q]) if v}

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "tight": self.tight,
            "n": self.n,
            "lhs": {str(q): v for q, v in sorted(self.lhs.items())},
            "rhs": {str(q): v for q, v in sorted(self.rhs.items())},
            "eta_rank": {str(q): v for q, v in sorted(self.eta_rank.items())},
            "entries": [
                {"q": q, "l": l, "lhs": self.lhs[q][l], "rhs": self.rhs[q][l], "equal": self.entry_equal(q, l)}
                for q in sorted(self.lhs) for l in range(self.m + 1)
                if self.lhs[q][l] or self.rhs[q][l]
            ],
        }


def eta_ranks(first, second, p):
    """Rank of eta = conn^{-1} i^* : H^l(H_q) -> H^{l-1}(coker i_q), l = 0..m."""
    m = first.A.m
    CA1, CB1, CC1 = first.complexes()
    out = []
    for l in range(m + 1):
        src, mid = CB1.node(l), CC1.node(l)
        istar = _induced_on_cohomology(first.proj.cochain_map(CB1, CC1, l), src, mid, p)
        if l == 0:
            out.append(0)
            continue
        conn = connecting_hom(second, l - 1)  # H^{l-1}(coker) -> H^l(Im)
        if conn.shape[0] != conn.shape[1] or rank(conn, p) != conn.shape[0]:
            raise InternalInconsistency("connecting map with acyclic middle is not invertible")
        if conn.shape[0] == 0 or istar.shape[1] == 0:
            out.append(0)
            continue
        eta = solve(conn, istar, p)
        out.append(rank(eta, p))
    return out


def theorem_b_report(K, p, engine=None, tightness=None):
    n = require_manifold(K, p)
    engine = engine or SubcomplexHomology(K, p)
    tight = (tightness or direct_check(K, p, engine=engine)).verdict == TIGHT
    lhs, rhs, eta = {}, {}, {}
    for q in range(n + 1):
        lhs[q] = cohomology_dims(cochain_complex(homology_functor(K, q, p, engine=engine), check=False))
        comp = cohomology_dims(cochain_complex(complement_cohomology_functor(K, q, p, engine=engine), check=False))
        rhs[q] = [0] + comp[:-1]
        _, first, second = diagonal_sequence(K, q, p, engine)
        eta[q] = eta_ranks(first, second, p)
    report = TheoremBReport(p, n, K.m, lhs, rhs, eta, tight)
    if tight:
        if not report.overall:
            raise InternalInconsistency("tight complex but the duality table is not symmetric")
        for q in lhs:
            if eta[q] != lhs[q]:
                raise InternalInconsistency(f"eta_{q} is not an isomorphism on a tight complex")
    return report
