"""Full-subcomplex Betti sweep and the bigraded Hochster table of H*(Z_K)."""

import os
import numpy as np

from . import _kernels
from .complex_core import bits, ordered_subsets, popcount, popcounts
from .errors import BudgetExceeded
from .field_linalg import check_prime, rank, zeros
from .homology import betti_from_row

DEFAULT_M_CAP = 24
HARD_M_CAP = 64


def default_threads():
    return os.cpu_count() or 1


class SubcomplexBettiCache:
    """Reduced Betti vectors of every K_J, stored by mask.

    ``table[J, i]`` is the reduced Betti number in degree ``i - 1`` of K_J.
    """

    def __init__(self, K, p, table):
        self.K = K
        self.p = p
        self.table = table

    @property
    def m(self):
        return self.K.m

    def reduced(self, J):
        return betti_from_row(self.table[J], reduced=True)

    def unreduced(self, J):
        return betti_from_row(self.table[J], reduced=False)

    def unreduced_degree(self, J, q):
        """beta_q(K_J), unreduced."""
        row = self.table[J]
        if q < 0 or q + 1 >= row.shape[0]:
            return 0
        v = int(row[q + 1])
        if q == 0 and J != 0:
            v += 1
        return v

    def reduced_totals(self):
        return self.table.sum(axis=1)

    def unreduced_totals(self):
        tot = self.reduced_totals().copy()
        tot[1:] += 1
        tot[0] -= 1
        return tot

    def __len__(self):
        return self.table.shape[0]


def all_subcomplex_betti(K, p, m_cap=DEFAULT_M_CAP, threads=None):
    """Reduced Betti vector of every full subcomplex K_J, J inside [m]."""
    p = check_prime(p)
    cap = min(int(m_cap), HARD_M_CAP)
    if K.m > cap:
        raise BudgetExceeded(K.m, cap)
    table = K.face_table
    subsets = ordered_subsets(K.m)
    rows = _kernels.subset_betti(table.masks, table.dim_start, table.bnd, subsets, p,
                                 threads=threads or default_threads())
    out = np.empty_like(rows)
    out[subsets.astype(np.int64)] = rows
    return SubcomplexBettiCache(K, p, out)


class BigradedTable:
    """Dimensions keyed by ``(k, l)``; bidegree ``(-k, 2l)``, total degree ``2l - k``."""

    def __init__(self, entries):
        self.entries = {key: int(v) for key, v in sorted(entries.items()) if v}

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    @property
    def total(self):
        return sum(self.entries.values())

    def single_graded(self):
        out = {}
        for (k, l), v in self.entries.items():
            out[2 * l - k] = out.get(2 * l - k, 0) + v
        return dict(sorted(out.items()))

    def bidegrees(self):
        return {(-k, 2 * l): v for (k, l), v in self.entries.items()}

    def __eq__(self, other):
        if not isinstance(other, BigradedTable):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self):
        return f"BigradedTable({self.entries})"


def hochster_table(cache):
    table = cache.table
    m = cache.m
    ls = popcounts(m)
    entries = {}
    for col in range(table.shape[1]):
        i = col - 1
        sums = np.bincount(ls, weights=table[:, col], minlength=m + 1)
        for l in range(m + 1):
            if sums[l]:
                entries[(l - i - 1, l)] = entries.get((l - i - 1, l), 0) + int(round(sums[l]))
    return BigradedTable(entries)


def beta_zk_total(cache):
    return int(cache.table.sum())


def koszul_oracle(K, p, max_m=6):
    """Bigraded cohomology of the squarefree Koszul model of F[K].

    Basis ``u_A v_sigma`` with A, sigma disjoint and sigma a face; the
    differential sends ``u_i`` to ``v_i`` and kills monomials leaving K.  It
    preserves the multidegree ``J = A | sigma``, so each J is handled alone.
    """
    p = check_prime(p)
    if K.m > max_m:
        raise BudgetExceeded(K.m, max_m)
    faces = set(K.all_faces())
    entries = {}
    for J in range(1 << K.m):
        l = popcount(J)
        by_k = {k: [] for k in range(l + 1)}
        for sigma in faces:
            if sigma & ~J == 0:
                by_k[l - popcount(sigma)].append(sigma)
        for k in by_k:
            by_k[k].sort()
        index = {k: {s: i for i, s in enumerate(v)} for k, v in by_k.items()}

        def diff(k):
            # C_k -> C_{k-1}
            if k <= 0 or k > l:
                return zeros(len(by_k.get(k - 1, [])), len(by_k.get(k, [])))
            D = zeros(len(by_k[k - 1]), len(by_k[k]))
            for j, sigma in enumerate(by_k[k]):
                A = J & ~sigma
                for pos, i in enumerate(bits(A)):
                    tau = sigma | (1 << i)
                    if tau in faces:
                        D[index[k - 1][tau], j] = 1 if pos % 2 == 0 else p - 1
            return D

        ranks = {k: rank(diff(k), p) for k in range(l + 2)}
        for k in range(l + 1):
            h = len(by_k[k]) - ranks[k] - ranks[k + 1]
            if h:
                entries[(k, l)] = entries.get((k, l), 0) + h
    return BigradedTable(entries)


def theorem_a_bound(m, beta_K):
    """Right-hand side 2^(m-1) (beta(K) - 2) + 2 of the total-rank bound."""
    return 2 ** (m - 1) * (beta_K - 2) + 2
