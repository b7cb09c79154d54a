"""Hot inner loops: elimination over GF(p) and the full-subcomplex Betti sweep.

Every kernel exists twice.  The ``*_loop`` functions are written as plain
loops and compiled with numba when it is importable; the ``*_np`` functions
are vectorised numpy.  ``MOMENTANGLE_NO_NUMBA=1`` selects the numpy path for
the public names at import time.  Both paths produce identical results.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("MOMENTANGLE_NO_NUMBA", "").strip() in ("", "0")


def _njit(func):
    if numba is None:  # pragma: no cover
        return func
    return numba.njit(cache=True, nogil=True)(func)


# ---------------------------------------------------------------------------
# loop kernels (numba)


def _inv_mod(a, p):
    result = 1
    base = a % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


_inv_mod = _njit(_inv_mod)


def _gfp_rref_loop(a, p):
    # in place; leftmost column, topmost nonzero row
    rows, cols = a.shape
    pivots = np.empty(min(rows, cols), np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        inv = _inv_mod(a[r, c], p)
        if inv != 1:
            for j in range(c, cols):
                a[r, j] = a[r, j] * inv % p
        for i in range(rows):
            if i != r and a[i, c] != 0:
                f = a[i, c]
                for j in range(c, cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        pivots[r] = c
        r += 1
    return pivots[:r]


_gfp_rref_loop = _njit(_gfp_rref_loop)


def _gf2_rref_loop(words, ncols):
    # in place on rows packed 64 columns per uint64 word, column c at bit c % 64
    rows, nw = words.shape
    pivots = np.empty(min(rows, ncols), np.int64)
    one = np.uint64(1)
    zero = np.uint64(0)
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        w = c >> 6
        bit = one << np.uint64(c & 63)
        piv = -1
        for i in range(r, rows):
            if words[i, w] & bit != zero:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(nw):
                t = words[r, j]
                words[r, j] = words[piv, j]
                words[piv, j] = t
        for i in range(rows):
            if i != r and words[i, w] & bit != zero:
                for j in range(w, nw):
                    words[i, j] ^= words[r, j]
        pivots[r] = c
        r += 1
    return pivots[:r]


_gf2_rref_loop = _njit(_gf2_rref_loop)


def _gf2_rank_inplace(words, nrows, ncols):
    # forward elimination only; touches words[:nrows]
    one = np.uint64(1)
    zero = np.uint64(0)
    nw = (ncols + 63) >> 6
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        w = c >> 6
        bit = one << np.uint64(c & 63)
        piv = -1
        for i in range(r, nrows):
            if words[i, w] & bit != zero:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(w, nw):
                t = words[r, j]
                words[r, j] = words[piv, j]
                words[piv, j] = t
        for i in range(r + 1, nrows):
            if words[i, w] & bit != zero:
                for j in range(w, nw):
                    words[i, j] ^= words[r, j]
        r += 1
    return r


_gf2_rank_inplace = _njit(_gf2_rank_inplace)


def _gfp_rank_inplace(a, nrows, ncols, p):
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, ncols):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        inv = _inv_mod(a[r, c], p)
        for i in range(r + 1, nrows):
            if a[i, c] != 0:
                f = a[i, c] * inv % p
                for j in range(c, ncols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        r += 1
    return r


_gfp_rank_inplace = _njit(_gfp_rank_inplace)


def _subset_betti_loop(face_masks, dim_start, bnd, subsets, p, out):
    ndims = dim_start.shape[0] - 1
    n_faces = face_masks.shape[0]
    zero = np.uint64(0)
    one = np.uint64(1)
    loc = np.full(n_faces, -1, np.int64)
    counts = np.zeros(ndims, np.int64)
    ranks = np.zeros(ndims + 1, np.int64)
    max_rows = 1
    max_cols = 1
    for d in range(ndims):
        size = dim_start[d + 1] - dim_start[d]
        if size > max_rows:
            max_rows = size
        if size > max_cols:
            max_cols = size
    words = np.zeros((max_rows, (max_cols + 63) >> 6), np.uint64)
    dense = np.zeros((max_rows, max_cols), np.int64)
    for s in range(subsets.shape[0]):
        J = subsets[s]
        notJ = ~J
        for d in range(ndims):
            k = 0
            for f in range(dim_start[d], dim_start[d + 1]):
                if face_masks[f] & notJ == zero:
                    loc[f] = k
                    k += 1
                else:
                    loc[f] = -1
            counts[d] = k
        ranks[0] = 1 if ndims > 0 and counts[0] > 0 else 0
        for d in range(1, ndims + 1):
            ranks[d] = 0
        for d in range(1, ndims):
            nr = counts[d]
            nc = counts[d - 1]
            if nr == 0 or nc == 0:
                continue
            if p == 2:
                nw = (nc + 63) >> 6
                for i in range(nr):
                    for j in range(nw):
                        words[i, j] = zero
                for f in range(dim_start[d], dim_start[d + 1]):
                    i = loc[f]
                    if i < 0:
                        continue
                    for t in range(d + 1):
                        c = loc[bnd[f, t]]
                        words[i, c >> 6] |= one << np.uint64(c & 63)
                ranks[d] = _gf2_rank_inplace(words, nr, nc)
            else:
                for i in range(nr):
                    for j in range(nc):
                        dense[i, j] = 0
                for f in range(dim_start[d], dim_start[d + 1]):
                    i = loc[f]
                    if i < 0:
                        continue
                    for t in range(d + 1):
                        c = loc[bnd[f, t]]
                        dense[i, c] = 1 if t % 2 == 0 else p - 1
                ranks[d] = _gfp_rank_inplace(dense, nr, nc, p)
        out[s, 0] = 1 - ranks[0]
        for d in range(ndims):
            out[s, d + 1] = counts[d] - ranks[d] - ranks[d + 1]


_subset_betti_loop = _njit(_subset_betti_loop)


# ---------------------------------------------------------------------------
# numpy kernels


def _gfp_rref_np(a, p):
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r, c:] = a[r, c:] * inv % p
        hit = a[:, c] != 0
        hit[r] = False
        if hit.any():
            a[hit, c:] = (a[hit, c:] - np.outer(a[hit, c], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return np.array(pivots, dtype=np.int64)


def _gf2_rref_np(words, ncols):
    rows = words.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        w, sh = c >> 6, np.uint64(c & 63)
        col = (words[:, w] >> sh) & np.uint64(1)
        nz = np.flatnonzero(col[r:])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            words[[r, piv]] = words[[piv, r]]
            col[[r, piv]] = col[[piv, r]]
        hit = col.astype(bool)
        hit[r] = False
        if hit.any():
            words[hit, w:] ^= words[r, w:]
        pivots.append(c)
        r += 1
    return np.array(pivots, dtype=np.int64)


def _rank_np(a, p):
    """Rank of a small dense int64 matrix by forward elimination."""
    a = a.copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        below = a[r + 1:, c]
        hit = np.flatnonzero(below) + r + 1
        if hit.size:
            if p == 2:
                a[hit, c:] ^= a[r, c:]
            else:
                f = a[hit, c] * pow(int(a[r, c]), p - 2, p) % p
                a[hit, c:] = (a[hit, c:] - np.outer(f, a[r, c:])) % p
        r += 1
    return r


def _subset_betti_np(face_masks, dim_start, bnd, subsets, p, out):
    ndims = dim_start.shape[0] - 1
    blocks = [face_masks[dim_start[d]:dim_start[d + 1]] for d in range(ndims)]
    sign_row = np.array([1 if t % 2 == 0 else p - 1 for t in range(max(ndims, 1))], dtype=np.int64)
    for s, J in enumerate(subsets):
        notJ = ~J
        inside = [(blk & notJ) == 0 for blk in blocks]
        counts = [int(x.sum()) for x in inside]
        ranks = [0] * (ndims + 1)
        if ndims > 0 and counts[0] > 0:
            ranks[0] = 1
        for d in range(1, ndims):
            nr, nc = counts[d], counts[d - 1]
            if nr == 0 or nc == 0:
                continue
            local = np.full(inside[d - 1].shape[0], -1, dtype=np.int64)
            local[inside[d - 1]] = np.arange(nc)
            rows = np.flatnonzero(inside[d]) + dim_start[d]
            cols = local[bnd[rows, : d + 1] - dim_start[d - 1]]
            mat = np.zeros((nr, nc), dtype=np.int64)
            mat[np.arange(nr)[:, None], cols] = sign_row[: d + 1]
            ranks[d] = _rank_np(mat, p)
        out[s, 0] = 1 - ranks[0]
        for d in range(ndims):
            out[s, d + 1] = counts[d] - ranks[d] - ranks[d + 1]


# ---------------------------------------------------------------------------
# dispatch

if USE_NUMBA:
    gfp_rref = _gfp_rref_loop
    gf2_rref_packed = _gf2_rref_loop
    _subset_betti_impl = _subset_betti_loop
else:
    gfp_rref = _gfp_rref_np
    gf2_rref_packed = _gf2_rref_np
    _subset_betti_impl = _subset_betti_np


def subset_betti(face_masks, dim_start, bnd, subsets, p, threads=1, impl=None):
    """Reduced Betti numbers of every full subcomplex listed in ``subsets``.

    Row ``s`` of the result holds degrees -1, 0, ..., D for the full
    subcomplex on ``subsets[s]``.  Work is split into contiguous chunks and
    each chunk writes only its own rows, so the output does not depend on
    ``threads``.
    """
    impl = impl or _subset_betti_impl
    n = subsets.shape[0]
    out = np.zeros((n, dim_start.shape[0]), dtype=np.int64)
    threads = max(1, int(threads))
    if threads == 1 or n < 256:
        impl(face_masks, dim_start, bnd, subsets, p, out)
        return out
    bounds = np.linspace(0, n, min(threads * 4, n) + 1).astype(np.int64)

    def work(i):
        lo, hi = bounds[i], bounds[i + 1]
        chunk = np.zeros((hi - lo, out.shape[1]), dtype=np.int64)
        impl(face_masks, dim_start, bnd, subsets[lo:hi], p, chunk)
        out[lo:hi] = chunk

    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(work, range(bounds.shape[0] - 1)))
    return out


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
