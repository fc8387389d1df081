"""
How the cell count grows with n
===============================

Fit the log-log slope of DP cells for the gap algorithm on planted pairs
with theta*n/2 edits, for a small and a large alphabet.

With a 4-letter alphabet almost every 4-token strip has a close match, so
one pivot clears most of a window and the work grows linearly.  With 26
letters the strips at eps = 1/4 are sparse, every candidate gets tested,
and the work grows quadratically.  At these sizes the sampling budget
exceeds the candidate count, so the sub-quadratic sampling regime is not
reached.  The 26-letter run takes about four minutes.
"""

from fractions import Fraction

from edx import run_scaling_experiment

# the large alphabet is slow, so it stops one doubling earlier
sizes = {4: [2 ** k for k in range(12, 17)], 26: [2 ** k for k in range(12, 16)]}
for sigma, ns in sizes.items():
    rep = run_scaling_experiment(ns, Fraction(1, 4), seed=0, alphabet_size=sigma)
    print(f"alphabet {sigma}: slope {rep.fitted_exponent:.3f}")
    for n, cells, secs in rep.points:
        print(f"   n={n:>6} cells={cells:>12} {secs:6.2f}s")
