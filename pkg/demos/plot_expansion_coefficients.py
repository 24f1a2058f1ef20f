"""
Low-energy expansion coefficients
=================================

At low energy I(eps_s) = c1 eps_s + c2 eps_s^2 + o(eps_s^2). Without noise c1 is
a relative-entropy-like term of the amplitudes; with either kind of noise c1
vanishes and c2 is the amplitude variance over 2 eps_n. Both forms are checked
against extrapolation from the exact mutual information.
"""

from poissonchan import (
    GeometricNoise,
    Noiseless,
    PoissonNoise,
    binary_flash,
    coefficients,
    extract_coeffs_empirical,
    uniform_pem,
)

grid = [1e-3, 1e-4, 1e-5]
cases = [
    ("flash p=0.1", binary_flash(0.1), Noiseless()),
    ("4-PEM", uniform_pem(2), Noiseless()),
    ("4-PEM", uniform_pem(2), PoissonNoise(1.0)),
    ("4-PEM", uniform_pem(2), GeometricNoise(1.0)),
]
for name, c, noise in cases:
    exact = coefficients(c, noise)
    fit = extract_coeffs_empirical(c, noise, grid)
    c1_emp = fit.c1 if fit.c1_fitted else fit.c1_probe
    print(f"{name:12} {type(noise).__name__:14} c1 {exact.c1:9.5f} vs {c1_emp:9.5f}"
          f"   c2 {exact.c2:9.5f} vs {fit.c2:9.5f}")

###############################################################################
# The noisy c2 does not depend on the noise law, only on its mean.
