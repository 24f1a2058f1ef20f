"""
How small must the energy be?
=============================

Write eps_s = exp(-t) and evaluate the flash-signalling ratio directly in t, so
energies far below the smallest double can be studied. The ratio reaches 0.99
only near eps_s = 1e-307.
"""

from poissonchan import LogEnergyPoint, flash_ratio_logdomain
from poissonchan.mi import flash_crossing

for t in (10, 30, 100, 300, 700, 2000, 1e4):
    ratio, remainder = flash_ratio_logdomain(t, with_bound=True)
    print(f"t = {t:8g}  log10 eps_s = {LogEnergyPoint(t).log10_eps_s:10.2f}"
          f"  ratio = {ratio:.6f}  (series remainder <= {remainder:.1e})")

t_star = flash_crossing(0.99)
print(f"\nratio = 0.99 at t = {t_star:.4f}, i.e. eps_s = 10^{LogEnergyPoint(t_star).log10_eps_s:.2f}")
