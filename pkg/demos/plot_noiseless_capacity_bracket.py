"""
Bracketing the noiseless capacity
=================================

No closed form exists for the capacity of the noiseless channel. An upper
bound and binary flash signalling squeeze it from both sides; both behave like
-eps_s log eps_s, but the lower bound gets there painfully slowly.
"""

import math

import numpy as np

from poissonchan import (
    BestOverGrid,
    PEqualsEps,
    PEqualsMinusEpsLogEps,
    capacity_upper_bound,
    flash_lower_bound,
)

print(" eps_s     upper  p=eps  p=-eps log eps  best p   (all divided by -eps log eps)")
for eps in np.geomspace(1e-12, 1e-2, 6):
    scale = -eps * math.log(eps)
    up = capacity_upper_bound(eps) / scale
    a = flash_lower_bound(eps, PEqualsEps())[0] / scale
    b = flash_lower_bound(eps, PEqualsMinusEpsLogEps())[0] / scale
    best, p = flash_lower_bound(eps, BestOverGrid())
    print(f"{eps:7.0e}  {up:.4f}  {a:.4f}  {b:.4f}          {best / scale:.4f}  ({p:.2e})")

###############################################################################
# Choosing p = eps_s only gets to 1 - 1/e of the asymptote, and even the best
# flash probability is still well below 0.9 at a picojoule-scale eps_s = 1e-12.
