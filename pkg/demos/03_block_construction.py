"""How the block sequence is laid out: deterministic grids interleaved with random grid points."""

from ppclab import (
    QSpec,
    block_schedule,
    construct_sequence,
    derive_ab,
    deterministic_block,
    gap_bound,
    gap_profile,
    grid_inclusion,
    halving_config,
    validate_config,
)
from ppclab.construction import block_layout

c = halving_config()
print("a(m):", [c.a(m) for m in range(1, 11)])
print("b(m):", [c.b(m) for m in range(1, 11)])
print("violations:", validate_config(c))

# Blocks up to n = 40: D_m adds the grid points of B_m that are new, R_m
# adds 2^(m-1) random points on the finer grid A_m.
for blk in block_layout(40, c):
    print(f"  {blk.kind}_{blk.m}: n = {blk.start}..{blk.stop}")
print("first slots:", block_schedule(6, c))
print("C_3 =", [str(p) for p in deterministic_block(3, c)])

z = construct_sequence(40, c, seed=12345)
print("Z_1..Z_12 =", [str(p) for p in z.points(12)])

# A schedule derived from a target gap count q(n) = log2(n) + 4.
q = QSpec.builtin("logn", 1 << 12)
d = derive_ab(q, 12)
print("\nderived a:", [d.a(m) for m in range(1, 13)])
print("derived b:", [d.b(m) for m in range(1, 13)])
print("rules broken:", [v.rule for v in validate_config(d, warn=False)])

# m - b(m) never grows here, so the pair-correlation limit is not claimed,
# but the gap count stays under the cap 2^h(m) <= q(n).
z = construct_sequence(1 << 12, d, seed=7, require_growth=False)
for n in (16, 64, 256, 1024, 4096):
    print(f"  n = {n:5d}  g = {gap_profile(z, n).g:2d}  cap = {gap_bound(n, d):2d}  q(n) = {q.q(n)}"
          f"  grids ok = {grid_inclusion(z, n, d)}")
