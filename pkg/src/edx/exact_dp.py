"""Exact edit-distance routines.

``edit_distance_full`` is the quadratic Wagner-Fischer recurrence written
with plain numpy row operations; it serves as the oracle for everything
else.  ``small_ed`` and ``bounded_edit_distance`` run a banded DP (compiled)
that only touches cells within ``k`` of the main diagonal.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import _kernels
from .core import Counters, as_tokens

#: Marker for "distance exceeds the supplied bound"; compares above any distance.
OVER_BOUND = math.inf


def edit_distance_full(x, y) -> int:
    """Unit-cost edit distance by the full quadratic recurrence.

    >>> edit_distance_full("kitten", "sitting")
    3
    """
    a = as_tokens(x)
    b = as_tokens(y)
    if a.size < b.size:
        a, b = b, a
    m = b.size
    if m == 0:
        return int(a.size)
    ramp = np.arange(m + 1, dtype=np.int64)
    row = ramp.copy()
    cur = np.empty(m + 1, dtype=np.int64)
    for i in range(1, a.size + 1):
        cur[0] = i
        np.minimum(row[:-1] + (b != a[i - 1]), row[1:] + 1, out=cur[1:])
        # horizontal moves within the row: cur[j] = min_{j'<=j} cur[j'] + (j - j')
        cur -= ramp
        np.minimum.accumulate(cur, out=cur)
        cur += ramp
        row, cur = cur, row
    return int(row[m])


def _budget(kappa, w: int) -> int:
    k = Fraction(kappa) * w
    if k < 0:
        raise ValueError(f"bound must be non-negative, got {kappa}")
    return math.floor(k)


def small_ed(z1, z2, kappa, counters: Counters | None = None):
    """Exact distance of two equal-length strings if it is at most ``kappa * w``.

    Returns the absolute distance, or :data:`OVER_BOUND` when
    ``d(z1, z2) > kappa * w``.  ``kappa`` is normalized by the common length
    ``w`` and may be any non-negative rational.
    """
    a = as_tokens(z1)
    b = as_tokens(z2)
    if a.size != b.size:
        raise ValueError(f"small_ed needs equal lengths, got {a.size} and {b.size}")
    w = int(a.size)
    k = _budget(kappa, w)
    out = np.empty(1, dtype=np.int64)
    cells = _kernels.one_vs_many(a, 0, b, np.zeros(1, dtype=np.int64), w, k, out)
    if counters is not None:
        counters.dp_cells += int(cells)
    d = int(out[0])
    return OVER_BOUND if d > k else d


def batch_small_ed(a: np.ndarray, a_off: int, b: np.ndarray, b_offs: np.ndarray, w: int,
                   budget: int, counters: Counters | None = None) -> np.ndarray:
    """Distances of ``a[a_off:a_off+w]`` against each ``b[o:o+w]``.

    Entries above ``budget`` come back as ``budget + 1``.
    """
    out = np.empty(b_offs.shape[0], dtype=np.int64)
    if b_offs.shape[0] == 0:
        return out
    cells = _kernels.one_vs_many(a, int(a_off), b, np.ascontiguousarray(b_offs, dtype=np.int64),
                                 int(w), int(budget), out)
    if counters is not None:
        counters.dp_cells += int(cells)
    return out


def banded_edit_distance(x, y, k: int, counters: Counters | None = None) -> int | None:
    """Exact distance if it is at most ``k``, else ``None`` (one banded pass)."""
    a = as_tokens(x)
    b = as_tokens(y)
    k = int(k)
    if k < 0:
        raise ValueError("band must be non-negative")
    prev = np.empty(2 * k + 3, dtype=np.int64)
    cur = np.empty(2 * k + 3, dtype=np.int64)
    d, cells = _kernels.banded_distance(a, 0, a.size, b, 0, b.size, k, prev, cur)
    if counters is not None:
        counters.dp_cells += int(cells)
    return int(d) if d <= k else None


def bounded_edit_distance(x, y, kmax: int, counters: Counters | None = None) -> int | None:
    """Exact distance when it is at most ``kmax``, found by band doubling.

    Bands ``1, 2, 4, ...`` are tried in turn, the last one clipped to
    ``kmax``; the first band that contains a path of cost within the band
    yields the exact answer.  Returns ``None`` if the distance exceeds ``kmax``.
    """
    if kmax < 0:
        raise ValueError("kmax must be non-negative")
    k = min(1, kmax)
    while True:
        d = banded_edit_distance(x, y, k, counters)
        if d is not None:
            return d
        if k >= kmax:
            return None
        k = min(2 * k, kmax)
