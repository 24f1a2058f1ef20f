"""
Low-energy expansion I(eps_s) = c1 eps_s + c2 eps_s**2 + o(eps_s**2).

Closed forms for the two coefficients, and an extractor that measures them
from :func:`poissonchan.mi.mutual_information` by Richardson extrapolation so
the closed forms can be checked numerically.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import xlogy

from .errors import DegenerateConstellation, GridTooCoarse
from .mi import mutual_information
from .types import ChannelPoint, Constellation, Noiseless, moments


@dataclass(frozen=True)
class ExpansionCoefficients:
    c1: float  # nats per unit energy
    c2: float  # nats per unit energy squared


def coeffs_noiseless(constellation: Constellation) -> ExpansionCoefficients:
    m = moments(constellation)
    if m.mu1 <= 0:
        raise DegenerateConstellation("all probability mass at x = 0; mu1 = 0")
    # c1 is degree 1 and c2 degree 2 in the amplitudes; work on x / max(x) so
    # tiny or huge amplitudes cannot underflow or overflow mu1**2
    scale = float(constellation.amplitudes.max())
    p = constellation.probs
    x = constellation.amplitudes / scale
    mu1 = math.fsum(p * x)
    mu2 = math.fsum(p * x * x)
    c1 = math.fsum(p * xlogy(x, x / mu1))
    c2 = 0.5 * (mu2 - mu1**2 - mu2 * math.log(mu2 / (mu1 * mu1)))
    return ExpansionCoefficients(c1 * scale, c2 * scale * scale)


def coeffs_noisy(constellation: Constellation, eps_n: float) -> ExpansionCoefficients:
    """Same answer for additive Poisson and additive geometric noise of mean ``eps_n``."""
    m = moments(constellation)
    return ExpansionCoefficients(0.0, (m.mu2 - m.mu1**2) / (2.0 * eps_n))


def coefficients(constellation, noise) -> ExpansionCoefficients:
    if isinstance(noise, Noiseless):
        return coeffs_noiseless(constellation)
    return coeffs_noisy(constellation, noise.eps_n)


def expansion_eval(coeffs: ExpansionCoefficients, eps_s):
    return coeffs.c1 * eps_s + coeffs.c2 * eps_s * eps_s


@dataclass(frozen=True)
class EmpiricalFit:
    """Measured coefficients plus the data they were fitted from.

    ``residuals[i] = I(eps[i]) - (c1 eps[i] + c2 eps[i]**2)``. For noisy models
    ``c1`` is not fitted; ``c1_probe`` holds ``I/eps_s`` at the smallest grid
    point, which must tend to zero.
    """

    coeffs: ExpansionCoefficients
    eps: Tuple[float, ...]
    mi: Tuple[float, ...]
    residuals: Tuple[float, ...]
    c1_fitted: bool
    c1_probe: float

    @property
    def c1(self):
        return self.coeffs.c1

    @property
    def c2(self):
        return self.coeffs.c2


def _richardson(f_big, e_big, f_small, e_small):
    # remove the linear term of f(e) = f0 + f1 e + O(e^2)
    return (f_small * e_big - f_big * e_small) / (e_big - e_small)


def extract_coeffs_empirical(constellation, noise, eps_grid, tol=1e-20) -> EmpiricalFit:
    """Measure (c1, c2) from exact mutual information on a grid of small energies.

    ``c1`` is the Richardson limit of ``I/eps`` from the two smallest energies.
    ``c2`` is the Richardson limit of ``(I - c1 eps)/eps**2`` over the two
    largest energies, where the quotient is least sensitive to error in ``c1``.
    For noisy channels ``c1 = 0`` is taken as known and ``c2`` comes from
    ``I/eps**2`` at the two smallest energies.

    Raises :class:`GridTooCoarse` unless the grid has at least three distinct
    positive points spanning two decades with every ``I < 0.1`` nats.
    """
    eps = sorted({float(e) for e in eps_grid}, reverse=True)
    if len(eps) < 3 or eps[-1] <= 0:
        raise GridTooCoarse("need at least three distinct positive energies")
    if eps[0] / eps[-1] < 100.0 * (1 - 1e-12):
        raise GridTooCoarse(f"grid spans {math.log10(eps[0] / eps[-1]):.2f} decades, need 2")
    mi = [mutual_information(ChannelPoint(constellation, noise, e), tol).nats for e in eps]
    if max(mi) >= 0.1:
        raise GridTooCoarse(f"mutual information {max(mi):.3g} nats is not small; shrink the grid")
    e = np.array(eps)
    i = np.array(mi)

    if isinstance(noise, Noiseless):
        r = i / e
        c1 = _richardson(r[-2], e[-2], r[-1], e[-1])
        q = (i - c1 * e) / e**2
        c2 = _richardson(q[0], e[0], q[1], e[1])
        fitted = True
    else:
        c1 = 0.0
        q = i / e**2
        c2 = _richardson(q[-2], e[-2], q[-1], e[-1])
        fitted = False
    coeffs = ExpansionCoefficients(float(c1), float(c2))
    residuals = i - (c1 * e + c2 * e**2)
    return EmpiricalFit(
        coeffs, tuple(eps), tuple(mi), tuple(map(float, residuals)), fitted, float(i[-1] / e[-1])
    )
