"""Gap lengths of the golden-ratio Kronecker sequence against random points."""

from ppclab import GOLDEN, gap_profile, gap_series, iid_uniform, kronecker

z = kronecker(GOLDEN, 5)
print("first five points:", [round(v, 4) for v in z.values])
p = gap_profile(z, 5, dedup_tol=1e-12)
print("N = 5 gaps:", [round(l, 4) for l in p.lengths], "multiplicities", p.multiplicities)

# However far we go, at most three distinct gap lengths appear, so one of
# them carries at least a third of all gaps.
z = kronecker(GOLDEN, 1 << 14)
checkpoints = [10, 100, 1000, 5000, 1 << 14]
print("\n   N   g  max_phi  max_ratio")
for row in gap_series(z, checkpoints, 1e-12):
    print(f"{row.N:5d} {row.g:3d} {row.max_phi:8d} {row.max_ratio:10.4f}")

# Random points: essentially every gap is different.
x = iid_uniform(1 << 14, seed=2)
print("\niid:")
for row in gap_series(x, checkpoints, 1e-12):
    print(f"{row.N:5d} {row.g:5d} {row.max_phi:4d} {row.max_ratio:10.6f}")
