"""Compiled inner loops.

Distances above a budget ``k`` are reported as ``k + 1``; callers translate
that into an over-bound result.  Every kernel returns the number of DP cells
it evaluated so the caller can charge :class:`~edx.core.Counters`.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def banded_distance(a, a_off, la, b, b_off, lb, k, prev, cur):
    """Banded edit distance of ``a[a_off:a_off+la]`` vs ``b[b_off:b_off+lb]``.

    Only cells with ``|j - i| <= k`` are evaluated.  ``prev``/``cur`` are
    scratch buffers of length ``>= 2k + 3``.  Returns ``(distance, cells)``
    with ``distance == k + 1`` meaning "greater than k".
    """
    over = k + 1
    if lb - la > k or la - lb > k:
        return over, 0
    width = 2 * k + 1
    # column j of row i lives at slot j - i + k + 1; slots 0 and width+1 stay at `over`
    for s in range(width + 2):
        prev[s] = over
        cur[s] = over
    cells = 0
    hi0 = min(lb, k)
    for j in range(hi0 + 1):
        prev[j + k + 1] = j
    cells += hi0 + 1
    for i in range(1, la + 1):
        jlo = max(0, i - k)
        jhi = min(lb, i + k)
        for s in range(width + 2):
            cur[s] = over
        row_min = over
        ai = a[a_off + i - 1]
        for j in range(jlo, jhi + 1):
            s = j - i + k + 1
            if j == 0:
                v = i
            else:
                # prev row, same column -> slot s+1; prev row, column j-1 -> slot s
                v = prev[s + 1] + 1
                t = cur[s - 1] + 1
                if t < v:
                    v = t
                t = prev[s] + (0 if ai == b[b_off + j - 1] else 1)
                if t < v:
                    v = t
            if v > over:
                v = over
            cur[s] = v
            if v < row_min:
                row_min = v
        cells += jhi - jlo + 1
        if row_min > k:
            return over, cells
        for s in range(width + 2):
            prev[s] = cur[s]
    res = prev[lb - la + k + 1]
    if res > k:
        res = over
    return res, cells


@njit(cache=True)
def one_vs_many(a, a_off, b, b_offs, w, k, out):
    """Distances of one length-``w`` window of ``a`` against many windows of ``b``."""
    kk = min(k, w)
    prev = np.empty(2 * kk + 3, dtype=np.int64)
    cur = np.empty(2 * kk + 3, dtype=np.int64)
    cells = 0
    for p in range(b_offs.shape[0]):
        dist, c = banded_distance(a, a_off, w, b, b_offs[p], w, kk, prev, cur)
        cells += c
        out[p] = dist if dist <= k else k + 1
    return cells


@njit(cache=True)
def _fenwick_update(tree, pos, value):
    i = pos + 1
    size = tree.shape[0]
    while i < size:
        if tree[i] < value:
            tree[i] = value
        i += i & (-i)


@njit(cache=True)
def _fenwick_prefix_max(tree, pos):
    i = pos + 1
    best = 0
    while i > 0:
        if tree[i] > best:
            best = tree[i]
        i -= i & (-i)
    return best


@njit(cache=True)
def max_benefit_sweep(n, ti, tj, hi, hj, cost):
    """Maximum total benefit of a monotone chain of shortcut edges.

    A Fenwick tree over y-coordinates ``0..n`` holds, for each head height,
    the best benefit of a chain whose last edge ends there (and whose head
    x-coordinate has already been swept past).
    """
    m = ti.shape[0]
    tree = np.zeros(n + 2, dtype=np.int64)
    q = np.zeros(m, dtype=np.int64)
    by_tail = np.argsort(ti, kind="mergesort")
    by_head = np.argsort(hi, kind="mergesort")
    pt = 0
    ph = 0
    for x in range(n + 1):
        while ph < m and hi[by_head[ph]] <= x:
            e = by_head[ph]
            if ti[e] < hi[e] and q[e] > 0:
                _fenwick_update(tree, hj[e], q[e])
            ph += 1
        while pt < m and ti[by_tail[pt]] == x:
            e = by_tail[pt]
            if ti[e] < hi[e]:
                benefit = (hi[e] - ti[e]) + (hj[e] - tj[e]) - cost[e]
                q[e] = benefit + _fenwick_prefix_max(tree, tj[e])
            pt += 1
    return _fenwick_prefix_max(tree, n)
