"""
Energy per bit under geometric noise
====================================

Sweep the signal energy for 4-level PEM and watch the energy per bit: it is
huge at low energy, dips to a minimum at a finite energy, then rises again.
The wideband floor eps_n log 2 is never reached.
"""

import math

import numpy as np

from poissonchan import (
    ChannelPoint,
    GeometricNoise,
    capacity_per_unit_cost,
    energy_per_bit,
    mutual_information,
    uniform_pem,
)

constellation = uniform_pem(2)
eps_grid = np.geomspace(1e-3, 1e3, 25)

for eps_n in (0.1, 1.0, 10.0):
    noise = GeometricNoise(eps_n)
    floor = capacity_per_unit_cost(noise, numeric=False).eb_min
    eb = []
    for eps_s in eps_grid:
        nats = mutual_information(ChannelPoint(constellation, noise, eps_s)).nats
        eb.append(energy_per_bit(eps_s, nats))
    k = int(np.argmin(eb))
    print(f"eps_n = {eps_n:5}: min eb = {eb[k]:8.4f} at eps_s = {eps_grid[k]:.3g}"
          f"   floor eps_n log 2 = {floor:.4f}")

###############################################################################
# The low-energy side follows log 2 / (c2 eps_s), with c2 the second-order
# coefficient of the expansion, so eb grows like 1/eps_s.

noise = GeometricNoise(1.0)
for eps_s in (1e-2, 1e-3, 1e-4):
    nats = mutual_information(ChannelPoint(constellation, noise, eps_s)).nats
    print(f"eps_s = {eps_s:.0e}   eb = {energy_per_bit(eps_s, nats):12.2f}"
          f"   bits = {nats / math.log(2):.3e}")
