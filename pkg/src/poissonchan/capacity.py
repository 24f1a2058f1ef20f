"""
Bounds on the capacity C(eps_s) of the noiseless discrete-time Poisson channel.

The upper bound is the closed form

    log[(1 + (sqrt(2e) - 1)/sqrt(1 + 2 eps)) (eps + 1/2)^(eps + 1/2) / (sqrt(e) eps^eps)],

and lower bounds come from flash signalling at a chosen on-probability ``p``.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .mi import flash_mi

_C = math.sqrt(2.0 * math.e) - 1.0


def capacity_upper_bound(eps_s):
    """Upper bound on C(eps_s) in nats.

    The constant terms of the logarithm cancel exactly at ``eps_s = 0``; they
    are removed analytically so small energies keep full relative accuracy:

        -eps log 2 + (eps + 1/2) log1p(2 eps) - eps log eps
            + log1p(c ((1 + 2 eps)^(-1/2) - 1) / (1 + c)),   c = sqrt(2e) - 1.
    """
    eps = float(eps_s)
    if not eps > 0 or not math.isfinite(eps):
        raise DomainError(f"signal energy must be positive and finite, got {eps_s!r}")
    shrink = math.expm1(-0.5 * math.log1p(2.0 * eps))
    return (
        -eps * math.log(2.0)
        + (eps + 0.5) * math.log1p(2.0 * eps)
        - eps * math.log(eps)
        + math.log1p(_C * shrink / (1.0 + _C))
    )


# Flash strategies -----------------------------------------------------------


@dataclass(frozen=True)
class FixedP:
    p: float

    def probabilities(self, eps_s):
        return [self.p]

    def describe(self):
        return f"flash p = {self.p:g}"


@dataclass(frozen=True)
class PEqualsEps:
    def probabilities(self, eps_s):
        return [eps_s]

    def describe(self):
        return "flash p = eps_s"


@dataclass(frozen=True)
class PEqualsMinusEpsLogEps:
    def probabilities(self, eps_s):
        return [-eps_s * math.log(eps_s)]

    def describe(self):
        return "flash p = -eps_s log eps_s"


@dataclass(frozen=True)
class BestOverGrid:
    """Maximize over a p-grid; by default 60 log-spaced points.

    The default grid runs from ``eps_s`` to ``min(1, 1e4 eps_s max(1, -log eps_s))``
    and so contains both ``p = eps_s`` and ``p = -eps_s log eps_s``. When
    ``eps_s >= 1`` it runs over [1e-3, 1] instead.
    """

    grid: Optional[Sequence[float]] = None
    points: int = 60

    def probabilities(self, eps_s):
        if self.grid is not None:
            return list(self.grid)
        if eps_s >= 1.0:
            return list(np.geomspace(1e-3, 1.0, self.points))
        hi = min(1.0, 1e4 * eps_s * max(1.0, -math.log(eps_s)))
        return list(np.geomspace(eps_s, hi, self.points))

    def describe(self):
        return "best flash over p-grid"


def flash_lower_bound(eps_s, strategy):
    """Flash-signalling mutual information for ``strategy``; returns ``(nats, p)``."""
    eps = float(eps_s)
    if not eps > 0:
        raise DomainError(f"signal energy must be positive, got {eps_s!r}")
    best, best_p = -math.inf, None
    for p in strategy.probabilities(eps):
        if not (0.0 < p <= 1.0):
            raise DomainError(f"{strategy.describe()} gives p = {p!r} outside (0, 1]")
        v = flash_mi(p, eps)
        if v > best:
            best, best_p = v, float(p)
    return best, best_p


@dataclass(frozen=True)
class CapacityBracket:
    eps_s: float
    lower_nats: float
    upper_nats: float
    lower_strategy: str
    p_used: float

    def ratios(self):
        """Both bounds divided by ``-eps_s log eps_s``."""
        scale = -self.eps_s * math.log(self.eps_s)
        return self.lower_nats / scale, self.upper_nats / scale


def capacity_bracket(eps_s, lower_strategy=None) -> CapacityBracket:
    strategy = lower_strategy if lower_strategy is not None else BestOverGrid()
    lower, p = flash_lower_bound(eps_s, strategy)
    upper = capacity_upper_bound(eps_s)
    if not (0.0 <= lower <= upper):
        raise ArithmeticError(f"bracket inverted at eps_s={eps_s}: {lower} > {upper}")
    return CapacityBracket(float(eps_s), lower, upper, strategy.describe(), p)
