"""
Upper bounds against the exact distance
=======================================

For planted pairs with growing edit density, compare the gap bound at a few
values of theta, the theta sweep, and the exact distance.
"""

from fractions import Fraction

from edx import GapConfig, ed_ub, edit_distance_full, gap_ub, gen_planted

n = 2 ** 12
print(f"{'edits':>6} {'exact':>6} {'theta=1':>8} {'1/2':>6} {'1/4':>6} {'sweep':>6}  method")
for edits in (3, 64, 256, 1024, 2048):
    inst = gen_planted(n, edits, alphabet_size=26, seed=edits)
    d = edit_distance_full(inst.x, inst.y)
    gaps = [gap_ub(inst.x, inst.y, GapConfig(Fraction(1, 2 ** t), seed=7)).upper_bound
            for t in range(3)]
    rep = ed_ub(inst.x, inst.y, seed=7)
    print(f"{edits:>6} {d:>6} {gaps[0]:>8} {gaps[1]:>6} {gaps[2]:>6} {rep.upper_bound:>6}  "
          f"{rep.method}")

# every bound is at least the exact distance; the contract caps the gap
# bound at 840*theta*n whenever d <= theta*n, which is far above 2n here
print("840*theta*n at theta=1/4:", 840 * n // 4, " 2n:", 2 * n)
