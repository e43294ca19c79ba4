"""Exact moments of F for the random component, and a Monte Carlo check."""

from fractions import Fraction

from ppclab import expected_F, gamma_k, halving_config, mc_moments, variance_F, variance_F_exact
from ppclab.oracles import format_rational

c = halving_config()

# One pair on the grid {t/32} lands within 1/8 of 0 with probability 9/32.
print("gamma(3, 2, s=1, y=8) =", gamma_k(3, 2, 1, 8))

# E[F] approaches 2s as N grows.
for N in (1 << 8, 1 << 12, 1 << 16):
    E = expected_F(N, 1, c)
    print(f"N = 2^{N.bit_length() - 1:2d}  E[F(1)] = {float(E):.6f}")

# Summing pair variances ignores that X_l - X_i and X_l - X_j share X_l.
# The exact variance adds those covariances back.
for N in (3, 4, 64, 1024):
    v, ve = variance_F(N, 1, c), variance_F_exact(N, 1, c)
    print(f"N = {N:4d}  pair sum = {float(v):.6e}  exact = {float(ve):.6e}")
print("N = 3 exact:", format_rational(variance_F_exact(3, Fraction(1, 2), c)))

rep = mc_moments(1 << 10, 1, c, samples=500, seed=0x5EED0004)
print("\nMonte Carlo, N = 1024, 500 samples")
print(f"  mean {rep.mc_mean:.5f} +- {rep.mc_stderr:.5f}   exact {float(rep.expectation):.5f}")
print(f"  var  {rep.mc_var:.3e}              pair sum {float(rep.variance):.3e}")
