"""Compiled inner loops.

The 1-d kernels avoid a sort per query: with the sample sorted once, the
neighbours of ``x`` are produced by merging the points right of ``x``
(ascending) with the points left of ``x`` (descending).  Ties in distance go
to the lower sample index, so the emitted order equals a stable argsort of
``|X - x|``.  Sums run in neighbour order, matching ``np.cumsum`` on the
ordered responses bit for bit.
"""

from __future__ import annotations

import numba
import numpy as np


class SortedLine:
    """A 1-d sample prepared for merge-ordered neighbour scans."""

    def __init__(self, x: np.ndarray, z: np.ndarray):
        x = np.ascontiguousarray(x, dtype=np.float64)
        z = np.ascontiguousarray(z, dtype=np.float64)
        idx = np.arange(len(x), dtype=np.int64)
        asc = np.lexsort((idx, x))
        desc = np.lexsort((idx, -x))
        self.n = len(x)
        self.xa, self.za, self.ia = x[asc], z[asc], asc.astype(np.int64)
        self.xd, self.zd, self.id = x[desc], z[desc], desc.astype(np.int64)

    def arrays(self):
        return self.xa, self.za, self.ia, self.xd, self.zd, self.id


@numba.njit(cache=True)
def _closer(xr, ir, xl, il, x):
    dr = abs(xr - x)
    dl = abs(xl - x)
    return dr < dl or (dr == dl and ir < il)


@numba.njit(cache=True)
def merged_order_1d(xa, za, ia, xd, zd, id_, x, kcap, out_idx, out_z):
    n = xa.shape[0]
    r = np.searchsorted(xa, x)
    l = n - r
    for k in range(kcap):
        if r < n and (l >= n or _closer(xa[r], ia[r], xd[l], id_[l], x)):
            out_idx[k] = ia[r]
            out_z[k] = za[r]
            r += 1
        else:
            out_idx[k] = id_[l]
            out_z[k] = zd[l]
            l += 1


@numba.njit(cache=True)
def lepski_1d_batch(xa, za, ia, xd, zd, id_, queries, kmin, kmax, half,
                    values, ks, checked, fallback):
    """Lepski sweep at every query; ``half[k-1]`` is the k-th half-width."""
    n = xa.shape[0]
    for j in range(queries.shape[0]):
        x = queries[j]
        r = np.searchsorted(xa, x)
        l = n - r
        s = 0.0
        if kmin > kmax:
            for k in range(n):
                if r < n and (l >= n or _closer(xa[r], ia[r], xd[l], id_[l], x)):
                    s += za[r]
                    r += 1
                else:
                    s += zd[l]
                    l += 1
            values[j] = s / n
            ks[j] = n
            checked[j] = 0
            fallback[j] = True
            continue
        for k in range(kmin - 1):
            if r < n and (l >= n or _closer(xa[r], ia[r], xd[l], id_[l], x)):
                s += za[r]
                r += 1
            else:
                s += zd[l]
                l += 1
        lo_max = -np.inf
        hi_min = np.inf
        best = 0.0
        kbest = kmin
        count = 0
        for k in range(kmin, kmax + 1):
            if r < n and (l >= n or _closer(xa[r], ia[r], xd[l], id_[l], x)):
                s += za[r]
                r += 1
            else:
                s += zd[l]
                l += 1
            m = s / k
            h = half[k - 1]
            count += 1
            lo_max = max(lo_max, m - h)
            hi_min = min(hi_min, m + h)
            if lo_max > hi_min:
                break
            best = m
            kbest = k
        values[j] = best
        ks[j] = kbest
        checked[j] = count
        fallback[j] = False


@numba.njit(cache=True)
def lepski_sweep_ordered(z_ordered, kmin, kmax, half):
    """Lepski sweep over responses already in neighbour order."""
    n = z_ordered.shape[0]
    s = 0.0
    if kmin > kmax:
        for k in range(n):
            s += z_ordered[k]
        return s / n, n, 0, True
    for k in range(kmin - 1):
        s += z_ordered[k]
    lo_max = -np.inf
    hi_min = np.inf
    best = 0.0
    kbest = kmin
    count = 0
    for k in range(kmin, kmax + 1):
        s += z_ordered[k - 1]
        m = s / k
        h = half[k - 1]
        count += 1
        lo_max = max(lo_max, m - h)
        hi_min = min(hi_min, m + h)
        if lo_max > hi_min:
            break
        best = m
        kbest = k
    return best, kbest, count, False


@numba.njit(cache=True)
def extrema_1d(xa, za, ia, xd, zd, id_, reps, penalty):
    """Exhaustive (query, k) maximisation for responses z and 1 - z.

    ``reps`` are sample indices (ascending) whose points serve as queries;
    ``penalty[k-1]`` is subtracted from the k-NN mean.  Ties resolve to the
    lowest query index, then the lowest k.
    """
    n = xa.shape[0]
    pos = np.empty(n, dtype=np.int64)
    for p in range(n):
        pos[ia[p]] = p
    best1 = -np.inf
    i1 = -1
    k1 = -1
    best0 = -np.inf
    i0 = -1
    k0 = -1
    for t in range(reps.shape[0]):
        i = reps[t]
        x = xa[pos[i]]
        r = np.searchsorted(xa, x)
        l = n - r
        s1 = 0.0
        s0 = 0.0
        for k in range(1, n + 1):
            if r < n and (l >= n or _closer(xa[r], ia[r], xd[l], id_[l], x)):
                zk = za[r]
                r += 1
            else:
                zk = zd[l]
                l += 1
            s1 += zk
            s0 += 1.0 - zk
            pen = penalty[k - 1]
            v1 = s1 / k - pen
            v0 = s0 / k - pen
            if v1 > best1:
                best1 = v1
                i1 = i
                k1 = k
            if v0 > best0:
                best0 = v0
                i0 = i
                k0 = k
    return best1, i1, k1, best0, i0, k0
