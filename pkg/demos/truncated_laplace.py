"""
Truncated Laplace as an affine conjugate of Laplace
===================================================

Truncating Laplace noise to [-h, h] and renormalizing gives a trade-off
curve obtained from the Laplace curve by an affine change of coordinates on
both axes. Both routes are computed here and compared.
"""

import math

import numpy as np

from dpnoise import noise1d
from dpnoise.noise1d import ApproxDP, NoiseModel
from dpnoise.tradeoff import ConjugateCurve, EpsDeltaCurve, NoiseCurve, dominates

eps, delta = 1.0, 0.01
h_std = noise1d.tlap_h(eps, delta)
print(f"eps={eps}, delta={delta}: truncation at {h_std:.4f} scale units")

lap = NoiseModel("laplace", 1.0 / eps)
tlap = NoiseModel("tlap", 1.0 / eps, h=h_std)
direct = NoiseCurve(tlap, 1.0)
conj = ConjugateCurve(NoiseCurve(lap, 1.0), lap, h_std / eps)

alphas = np.linspace(0.0, 1.0, 11)
print(f"{'alpha':>6} {'direct':>10} {'conjugate':>10}")
for a, b1, b2 in zip(alphas, direct(alphas), conj(alphas)):
    print(f"{a:6.2f} {b1:10.6f} {b2:10.6f}")
grid = np.linspace(0.0, 1.0, 10_001)
print(f"max disagreement on a fine grid: {np.max(np.abs(direct(grid) - conj(grid))):.2e}")

# The curve meets the (eps, delta) template
print(f"dominates f_(eps, delta): {dominates(direct, EpsDeltaCurve(eps, delta))}")

# Variance: closed form, quadrature, and the competing formula that disagrees
closed = noise1d.tlap_second_moment_standard(h_std)
quad = noise1d.tlap_second_moment_quadrature(h_std)
alt = noise1d.tlap_second_moment_alternative(eps, h_std) * eps**2
print(f"\nstandardized variance: closed form {closed:.6f}, quadrature {quad:.6f}, alternative {alt:.6f}")

# Reciprocal structure of the Laplace curve on its middle segment
a = np.linspace(0.5 * math.exp(-eps), 0.5, 5)
print("alpha * f(alpha) on the Laplace middle segment:", np.round(a * NoiseCurve(lap, 1.0)(a), 12))
print(f"constant e^-eps / 4 = {math.exp(-eps) / 4:.12f}")

model = noise1d.calibrate(ApproxDP(eps, delta), 1.0, "tlap")
print(f"\ncalibrated model: {model.to_dict()}")
