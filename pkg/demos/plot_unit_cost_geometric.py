"""
Capacity per unit energy with geometric noise
=============================================

With a zero-energy symbol, the capacity per unit energy is the supremum of
D(Q(.|x) || Q(.|0)) / (eps_s x). Under Poisson noise it is unbounded. Under
geometric noise the ratio grows monotonically in the signal mean lam and
levels off at log(1 + 1/eps_n), which is smaller than 1/eps_n.
"""

import math

import numpy as np

from poissonchan import (
    GeometricNoise,
    capacity_per_unit_cost,
    divergence_geometric_noise,
    divergence_poisson_noise,
    geometric_divergence_rate_limit,
)

for lam in np.geomspace(1e-2, 1e5, 8):
    print(f"lam = {lam:9.3g}   Poisson noise D/lam = {divergence_poisson_noise(lam, 1.0) / lam:8.4f}"
          f"   geometric noise D/lam = {divergence_geometric_noise(lam, 1.0) / lam:.6f}")

###############################################################################
# Numeric supremum against the two candidate limits.

for eps_n in (0.5, 1.0, 2.0):
    r = capacity_per_unit_cost(GeometricNoise(eps_n))
    print(f"eps_n = {eps_n}: numeric sup {r.numeric.value:.6f} (lam = {r.numeric.argmax:.3g}),"
          f" log(1 + 1/eps_n) = {geometric_divergence_rate_limit(eps_n):.6f},"
          f" 1/eps_n = {1 / eps_n:.6f}; eb_min reported {r.eb_min:.6f} = eps_n log 2"
          f" ({math.isclose(r.eb_min, eps_n * math.log(2))})")
