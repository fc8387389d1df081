"""
Shortcut paths
==============

Shrink a few certified boxes into shortcut edges and compare the
prefix-maximum sweep with the full-grid DP.
"""

from fractions import Fraction

import numpy as np

from edx import (BoxSpec, CertifiedBox, Interval, ShortcutGraph, boxes_to_shortcuts,
                 min_cost_path, min_cost_path_naive)


def box(i, j, w, kappa):
    k = Fraction(kappa)
    return CertifiedBox(BoxSpec(Interval(i, i + w), Interval(j, j + w, "y")),
                        k.numerator, k.denominator)


boxes = [box(0, 0, 16, 0), box(16, 20, 16, Fraction(1, 8)), box(32, 32, 32, Fraction(3, 4))]
g = boxes_to_shortcuts(boxes, 64)
for e in g.edges:
    print(e)
# the last box is dropped: a bound of 3/4 cannot beat plain steps
print("cost:", min_cost_path(g), " naive:", min_cost_path_naive(g), " no edges:", 2 * 64)

rng = np.random.default_rng(3)
n, m = 200, 3000
ti = rng.integers(0, n + 1, m)
tj = rng.integers(0, n + 1, m)
hi = ti + rng.integers(0, n + 1, m) % (n + 1 - ti)
hj = tj + rng.integers(0, n + 1, m) % (n + 1 - tj)
g = ShortcutGraph(n, ti, tj, hi, hj, rng.integers(0, 2 * n, m))
print("random graph:", min_cost_path(g), min_cost_path_naive(g))
