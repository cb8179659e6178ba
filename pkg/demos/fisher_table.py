"""
Moments and Fisher information of norm-power densities
======================================================

For density proportional to exp(-||x||_p^alpha) both the second moment
E||X||^2 and the Fisher information have closed forms in Gamma functions.
Their product is scale-free and bounded below by n, with equality exactly
in the Gaussian case.
"""

from dpnoise import fisher
from dpnoise.lp_sampler import NormPowerDensity

print(f"{'n':>4} {'p':>4} {'alpha':>5} {'E||X||^2':>12} {'Fisher':>12} {'product/n':>12}")
for n in (2, 10, 100):
    for p, alpha in [(1.0, 1.0), (2.0, 1.0), (2.0, 2.0), (3.0, 2.0)]:
        s = fisher.fisher_summary(n, p, alpha)
        print(f"{n:4d} {p:4.1f} {alpha:5.1f} {s.second_moment_l2:12.5g} {s.fisher_norm:12.5g} {s.uncertainty_l2 / n:12.6f}")

# Exact values against Monte Carlo
d = NormPowerDensity(10, 3.0, 2.0)
exact = fisher.fisher_info_exact(10, 3.0, 2.0)
mc, se = fisher.fisher_info_mc(d, 100_000, seed=0, return_se=True)
print(f"\nn=10, p=3, alpha=2: exact {exact:.5f}, Monte Carlo {mc:.5f} +/- {se:.5f}")

# Large-n asymptotics
for n in (10, 100, 1000):
    mom_a, lam_a = fisher.asymptotics(n, 3.0, 2.0)
    print(f"n={n:5d}: exact/asymptotic moment {fisher.second_moment_exact(n, 3.0, 2.0) / mom_a:.4f}, "
          f"Fisher {fisher.fisher_info_exact(n, 3.0, 2.0) / lam_a:.4f}")

# Scale needed for mu-GDP
print(f"\nGDP scale at n=30, p=alpha=2, c=1/2, mu=1: {fisher.gdp_scale(30, 2.0, 2.0, 0.5, 1.0):.6f}")
