"""Min-cost source-to-sink paths in grid graphs with diagonal shortcuts.

The graph on ``{0..n}^2`` has unit-cost horizontal and vertical steps plus
weighted shortcut edges ``(i, j) -> (i', j')`` with ``i < i'`` and ``j < j'``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .core import CertifiedBox


@dataclass(frozen=True)
class ShortcutEdge:
    tail: tuple[int, int]
    head: tuple[int, int]
    cost: int

    def __post_init__(self):
        (i, j), (i2, j2) = self.tail, self.head
        if i2 < i or j2 < j:
            raise ValueError(f"shortcut {self.tail}->{self.head} is not monotone")
        if self.cost < 0:
            raise ValueError("shortcut costs must be non-negative")


class ShortcutGraph:
    """Shortcut edges over the ``(n+1) x (n+1)`` grid, stored column-wise."""

    def __init__(self, n: int, ti, tj, hi, hj, cost):
        self.n = int(n)
        self.ti, self.tj, self.hi, self.hj, self.cost = (
            np.ascontiguousarray(a, dtype=np.int64) for a in (ti, tj, hi, hj, cost))
        m = self.ti.size
        if any(a.size != m for a in (self.tj, self.hi, self.hj, self.cost)):
            raise ValueError("edge columns must have equal length")
        if m:
            lo = min(a.min() for a in (self.ti, self.tj, self.hi, self.hj))
            hi = max(a.max() for a in (self.ti, self.tj, self.hi, self.hj))
            if lo < 0 or hi > self.n:
                raise ValueError(f"edge coordinates must lie in [0, {self.n}]")
            if (self.hi < self.ti).any() or (self.hj < self.tj).any():
                raise ValueError("shortcut edges must be monotone")
            if (self.cost < 0).any():
                raise ValueError("shortcut costs must be non-negative")

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[ShortcutEdge]) -> "ShortcutGraph":
        cols = np.array([(e.tail[0], e.tail[1], e.head[0], e.head[1], e.cost) for e in edges],
                        dtype=np.int64).reshape(-1, 5)
        return cls(n, *cols.T)

    @property
    def m(self) -> int:
        return int(self.ti.size)

    def __len__(self):
        return self.m

    @property
    def edges(self) -> list[ShortcutEdge]:
        return [ShortcutEdge((a, b), (c, d), e) for a, b, c, d, e in
                zip(self.ti.tolist(), self.tj.tolist(), self.hi.tolist(), self.hj.tolist(),
                    self.cost.tolist())]

    def with_edges(self, ti, tj, hi, hj, cost) -> "ShortcutGraph":
        """A new graph with the given edges appended."""
        return ShortcutGraph(self.n, *(np.concatenate([a, np.atleast_1d(np.asarray(b, np.int64))])
                                       for a, b in zip((self.ti, self.tj, self.hi, self.hj,
                                                        self.cost), (ti, tj, hi, hj, cost))))


def boxes_to_shortcuts(boxes, n: int) -> ShortcutGraph:
    """Convert certified boxes into shrunken shortcut edges.

    A box ``I x J`` with bound ``kappa < 1/2`` becomes the edge
    ``(I.lo, J.lo + l) -> (I.hi, J.hi - l)`` of cost ``3 l`` where
    ``l = floor(kappa * width)``.  Boxes with ``kappa >= 1/2`` are dropped.

    ``boxes`` is a :class:`~edx.covering.BoxSet` or any iterable of
    :class:`~edx.core.CertifiedBox`.
    """
    if hasattr(boxes, "shortcut_arrays"):
        i_lo, i_hi, j_lo, j_hi, num, den = boxes.shortcut_arrays()
    else:
        rows = [(b.box.I.lo, b.box.I.hi, b.box.J.lo, b.box.J.hi, b.kappa_num, b.kappa_den)
                for b in _iter_boxes(boxes) if 2 * b.kappa_num < b.kappa_den]
        arr = np.array(rows, dtype=np.int64).reshape(-1, 6)
        i_lo, i_hi, j_lo, j_hi, num, den = arr.T
    width = i_hi - i_lo
    ell = (num * width) // den
    return ShortcutGraph(n, i_lo, j_lo + ell, i_hi, j_hi - ell, 3 * ell)


def _iter_boxes(boxes: Iterable[CertifiedBox]):
    for b in boxes:
        if not isinstance(b, CertifiedBox):
            raise TypeError(f"expected CertifiedBox, got {type(b).__name__}")
        yield b


def min_cost_path(g: ShortcutGraph) -> int:
    """Cost of the cheapest ``(0,0) -> (n,n)`` path, via a max-benefit sweep.

    Each shortcut is re-weighted to its benefit ``(i'-i) + (j'-j) - cost``
    (plain steps have benefit 0), and the answer is ``2n`` minus the best
    total benefit of a monotone chain.  Edges are swept by tail x-coordinate
    with a prefix-maximum Fenwick tree over head y-coordinates; edges whose
    tail and head share an x-coordinate are ignored.  ``O(n + m log(mn))``.
    """
    if g.m == 0:
        return 2 * g.n
    best = _kernels.max_benefit_sweep(g.n, g.ti, g.tj, g.hi, g.hj, g.cost)
    return int(2 * g.n - best)


def min_cost_path_naive(g: ShortcutGraph) -> int:
    """Same contract as :func:`min_cost_path`, by DP over every grid vertex.

    Quadratic in ``n``; meant as a test oracle.
    """
    n = g.n
    ramp = np.arange(n + 1, dtype=np.int64)
    dist = np.empty((n + 1, n + 1), dtype=np.int64)
    dist[0] = ramp
    keep = g.ti < g.hi
    ti, tj, hi, hj, cost = (a[keep] for a in (g.ti, g.tj, g.hi, g.hj, g.cost))
    order = np.argsort(hi, kind="stable")
    ti, tj, hi, hj, cost = (a[order] for a in (ti, tj, hi, hj, cost))
    starts = np.searchsorted(hi, ramp, side="left")
    ends = np.searchsorted(hi, ramp, side="right")
    for i in range(1, n + 1):
        row = dist[i - 1] + 1
        s, e = starts[i], ends[i]
        if e > s:
            np.minimum.at(row, hj[s:e], dist[ti[s:e], tj[s:e]] + cost[s:e])
        row -= ramp
        np.minimum.accumulate(row, out=row)
        row += ramp
        dist[i] = row
    return int(dist[n, n])
