"""
Capacity per unit energy and energy per bit.

For a channel with a zero-energy input the capacity per unit energy is
``sup_lam D(Q(.|lam) || Q(.|0)) / lam`` over signal means ``lam = eps_s x``.
This module evaluates those divergences for additive Poisson and additive
geometric noise and searches the supremum numerically.
"""

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.special import pdtr, pdtrc

from .channel import poisson_log_pmf, truncation_point
from .errors import DomainError, check_tol
from .types import GeometricNoise, Noiseless, PoissonNoise

LOG2 = math.log(2.0)


def _h(u):
    # (1 + u) log1p(u) - u, series below 1e-3 to avoid cancellation
    if abs(u) < 1e-3:
        return u * u * (0.5 - u * (1 / 6 - u * (1 / 12 - u / 20)))
    return (1.0 + u) * math.log1p(u) - u


def divergence_poisson_noise(lam, eps_n):
    """D(Poisson(lam + eps_n) || Poisson(eps_n)) = -lam + (lam + eps_n) log(1 + lam/eps_n)."""
    if lam < 0 or eps_n <= 0:
        raise DomainError("need lam >= 0 and eps_n > 0")
    return eps_n * _h(lam / eps_n)


def _log_poisson_cdf(y, alpha):
    # log P(Poisson(alpha) <= y) for y = 0..Y: complement form near 1, direct
    # CDF in the bulk, cumulative log-sum-exp where the CDF underflows
    y = np.asarray(y)
    cdf = pdtr(y, alpha)
    out = np.empty(y.shape)
    upper = cdf > 0.5
    out[upper] = np.log1p(-pdtrc(y[upper], alpha))
    mid = (~upper) & (cdf > 1e-300)
    out[mid] = np.log(cdf[mid])
    low = ~(upper | mid)
    if low.any():
        k = int(y[low].max())
        acc = np.logaddexp.accumulate(poisson_log_pmf(np.arange(k + 1), alpha))
        out[low] = acc[y[low]]
    return out


def divergence_geometric_noise(lam, eps_n, tol=1e-14):
    """D(Q(.|lam) || Q(.|0)) for additive geometric noise of mean ``eps_n``.

    Writing ``q(y)`` for the Poisson(alpha) CDF, ``alpha = lam (1 + 1/eps_n)``,
    the output law is ``Q(y|lam) = e^{lam/eps_n} beta^y q(y) / (1 + eps_n)`` and

        D = lam/eps_n + sum_y Q(y|lam) log q(y).

    Truncation: ``0 >= log q(y) >= log q(0) = -alpha``, so the neglected part of
    the sum lies in ``[-alpha * tail, 0]``. ``Y`` is chosen so the channel tail
    bound is below ``tol / max(1, alpha)``.
    """
    if lam < 0 or eps_n <= 0:
        raise DomainError("need lam >= 0 and eps_n > 0")
    tol = check_tol(tol)
    if lam == 0:
        return 0.0
    alpha = lam * (1.0 + 1.0 / eps_n)
    noise = GeometricNoise(eps_n)
    y_max = truncation_point(noise, lam, tol / max(1.0, alpha))
    y = np.arange(y_max + 1)
    log_q = _log_poisson_cdf(y, alpha)
    log_row = lam / eps_n - math.log1p(eps_n) - y * math.log1p(1.0 / eps_n) + log_q
    s = float(np.dot(np.exp(log_row), log_q))
    return max(0.0, lam / eps_n + s)


def geometric_divergence_rate_limit(eps_n):
    """lim_{lam -> inf} D(lam)/lam for additive geometric noise: log(1 + 1/eps_n).

    From ``-log Q(y|0) = log(1+eps_n) + y log(1 + 1/eps_n)``,
    ``D = log(1+eps_n) + (lam + eps_n) log(1 + 1/eps_n) - H(Y)`` and the output
    entropy grows only logarithmically in ``lam``.
    """
    return math.log1p(1.0 / eps_n)


@dataclass(frozen=True)
class DivergenceCurvePoint:
    lam: float
    d_nats: float

    @property
    def d_per_energy(self):
        return self.d_nats / self.lam


@dataclass(frozen=True)
class SupSearch:
    value: float
    argmax: float
    trace: List[DivergenceCurvePoint]
    converged: bool


def sup_divergence_rate(eps_n, lam_lo=1e-2, lam_cap=1e6, per_decade=8, rel_improvement=1e-3):
    """Numerical sup of D(lam)/lam for geometric noise on a growing log grid.

    The grid starts on [lam_lo, 100 lam_lo]; its right end is doubled until the
    best value gained less than ``rel_improvement`` (relative) over the last
    decade, or the end passes ``lam_cap``.
    """
    trace = []

    def add(lams):
        for lam in lams:
            trace.append(DivergenceCurvePoint(float(lam), divergence_geometric_noise(lam, eps_n)))

    hi = 100.0 * lam_lo
    add(np.geomspace(lam_lo, hi, 2 * per_decade + 1))
    converged = False
    while True:
        new_hi = 2.0 * hi
        n = max(2, int(round(per_decade * math.log10(2.0))) + 1)
        add(np.geomspace(hi, new_hi, n + 1)[1:])
        hi = new_hi
        best = max(pt.d_per_energy for pt in trace)
        older = max(pt.d_per_energy for pt in trace if pt.lam <= hi / 10.0)
        if (best - older) < rel_improvement * best:
            converged = True
            break
        if hi > lam_cap:
            break
    top = max(trace, key=lambda pt: pt.d_per_energy)
    return SupSearch(top.d_per_energy, top.lam, trace, converged)


@dataclass(frozen=True)
class UnitCostResult:
    """Capacity per unit energy (nats) and the minimum energy per bit.

    ``c1_per_unit_energy`` is ``math.inf`` when unbounded, in which case
    ``eb_min`` is exactly 0. For geometric noise ``numeric`` carries the
    grid search of D(lam)/lam.
    """

    c1_per_unit_energy: float
    eb_min: float
    witness: str
    numeric: SupSearch = field(default=None, repr=False)


def capacity_per_unit_cost(noise, numeric=True) -> UnitCostResult:
    """Capacity per unit energy and minimum energy per bit for ``noise``.

    Noiseless and Poisson-noise channels: C1 is infinite and eb_min = 0 (the
    Poisson-noise divergence rate grows like log(lam)). Geometric noise: the
    closed form ``C1 = 1/eps_n``, ``eb_min = eps_n log 2`` is returned together
    with the numerical supremum of D(lam)/lam, which stays strictly below
    ``1/eps_n`` and in fact tends to :func:`geometric_divergence_rate_limit`.
    """
    if isinstance(noise, (Noiseless, PoissonNoise)):
        return UnitCostResult(math.inf, 0.0, "D(lam)/lam unbounded as lam -> inf")
    if isinstance(noise, GeometricNoise):
        search = sup_divergence_rate(noise.eps_n) if numeric else None
        return UnitCostResult(
            1.0 / noise.eps_n,
            noise.eps_n * LOG2,
            "sup of D(lam)/lam approached as lam -> inf",
            search,
        )
    raise TypeError(f"unknown noise model {noise!r}")


def energy_per_bit(eps_s, mi_nats):
    """eps_b = eps_s log 2 / I, with I in nats."""
    if not mi_nats > 0:
        raise DomainError(f"energy per bit needs positive mutual information, got {mi_nats!r}")
    return eps_s * LOG2 / mi_nats
