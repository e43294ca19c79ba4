"""Counting close pairs on the torus, exactly and in floating point."""

from fractions import Fraction

import numpy as np

from ppclab import PcQuery, SequenceRecord, equispaced, iid_uniform, pair_count_brute, pair_count_fast, pc_statistic
from ppclab.pair_correlation import pc_curve

# Eight equispaced points. Every point has two neighbours at distance 1/8,
# so a strict radius of 1.5/8 catches 16 ordered pairs and F = 16/8.
eight = equispaced(8)
print("equispaced 8, r = 3/16:", pair_count_brute(eight, 8, Fraction(3, 16), "strict"))
print("F(1.5) =", pc_statistic(eight, PcQuery(8, 1.5)))

# The radius sits exactly on a tie at 1/8. Strict and non-strict differ there.
for pred in ("strict", "nonstrict"):
    print(f"r = 1/8, {pred:9s}:", pair_count_fast(eight, 8, Fraction(1, 8), pred))

# Random points: the fast sweep and the O(N^2) loop give the same integer.
x = iid_uniform(4096, seed=1)
r = 1 / 4096
print("iid 4096, fast vs brute:", pair_count_fast(x, 4096, r), pair_count_brute(x, 4096, r))

# For uniform random points F(s) is close to 2s at every s.
grid = np.arange(0.25, 3.01, 0.25)
for s, F in pc_curve(x, 4096, grid):
    print(f"  s = {s:4.2f}  F = {F:6.3f}  2s = {2 * s:4.2f}")

# Coincident points are distance 0 apart and count at radius 0 (non-strict).
dup = SequenceRecord.from_floats([0.0, 0.0, 0.5])
print("{0, 0, 1/2}, r = 0:", pair_count_fast(dup, 3, 0, "nonstrict"))
