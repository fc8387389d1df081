"""
Certified boxes on a planted pair
=================================

Run the covering phase on a pair with known edits, look at what it emits
and check a sample of the boxes against the exact DP.
"""

from collections import Counter
from fractions import Fraction

import numpy as np

from edx import audit_boxes, covering_algorithm, gen_planted, select_params

n = 2 ** 11
theta = Fraction(1, 4)

# 26 letters keeps random 4-token strips far apart, so some of them are
# declared sparse and get extended to w2-boxes
inst = gen_planted(n, n // 16, alphabet_size=26, seed=1)
params = select_params(n, theta, seed=1)
print("w1, w2, d =", params.w1, params.w2, params.d)

R = covering_algorithm(inst.x, inst.y, params)
print("boxes:", len(R), " from pivots:", R.n_dense, " from extensions:", R.n_extension)

# pivot boxes carry bound 5*eps, extension boxes p/w2 + theta + 2^-k
kappas = Counter(Fraction(b.kappa_num, b.kappa_den) for b in R.blocks)
print("pivot blocks per bound:", {str(k): v for k, v in sorted(kappas.items())})
e = R.extensions
if e.size:
    k = e["kappa_num"] / e["kappa_den"]
    print("extension bounds: min %.3f  median %.3f  below 1/2: %d"
          % (k.min(), np.median(k), int((k < 0.5).sum())))

rng = np.random.default_rng(0)
bad = audit_boxes(inst.x, inst.y, R.sample(500, rng))
print("violations among 500 sampled boxes:", len(bad))

# a few raw records in the dump format
for i, rec in zip(range(3), R.iter_records()):
    print(" ".join(map(str, rec)))
