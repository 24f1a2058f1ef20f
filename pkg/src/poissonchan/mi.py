"""
Mutual information of the discrete-time Poisson channel.

:func:`mutual_information` is the generic evaluator for any finite
constellation and noise model. It sums

    I = sum_x P(x) sum_y Qbar(y) * phi(log Q(y|x) - log Qbar(y)),
    phi(d) = d e^d - e^d + 1 >= 0,

which equals the textbook ``sum P Q log(Q/Qbar)`` because
``sum_x P(x) (Qbar(y) - Q(y|x)) = 0`` for every output ``y``. Every summand is
nonnegative, so there is no cancellation at small signal energy where the
textbook terms are ``O(eps_s)`` but their sum is ``O(eps_s**2)``.

:func:`flash_mi` is the closed form for the noiseless channel with inputs
``{0, 1/p}``, and :func:`flash_ratio_logdomain` evaluates it with
``p = -eps_s log eps_s`` purely as a function of ``t = -log eps_s``, which keeps
working far below the smallest positive double.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .channel import log_output_law, log_tail_bound, transition_logprob, truncation_point
from .errors import DomainError, check_tol
from .types import ChannelPoint


@dataclass(frozen=True)
class MiResult:
    nats: float
    error_budget: float
    y_max: int

    @property
    def bits(self):
        return self.nats / math.log(2.0)


def _phi(d):
    # d e^d - expm1(d), with a series near 0 where the two terms cancel
    d = np.asarray(d, dtype=float)
    out = np.empty_like(d)
    neg_inf = np.isneginf(d)
    out[neg_inf] = 1.0
    small = (np.abs(d) < 1e-2) & ~neg_inf
    ds = d[small]
    # sum_{n>=2} (n-1) d^n / n!
    out[small] = ds * ds * (0.5 + ds * (1 / 3 + ds * (1 / 8 + ds * (1 / 30 + ds * (1 / 144 + ds / 840)))))
    big = ~(small | neg_inf)
    db = d[big]
    out[big] = db * np.exp(db) - np.expm1(db)
    return out


def mutual_information(point: ChannelPoint, tol: float = 1e-12) -> MiResult:
    """I(X; S(X) + Z) in nats for one operating point.

    All rows share the output range ``0..y_max``, chosen so that each row's
    certified tail mass is below ``tol / (1 + max|log P(x)|)``. The neglected
    part of the sum is at most ``sum_x P(x) tail_x |log P(x)|`` (use
    ``Q/Qbar <= 1/P(x)``), which is reported as ``error_budget <= tol``.
    """
    tol = check_tol(tol)
    c = point.constellation
    p = c.probs
    log_p = np.log(p)
    means = point.eps_s * c.amplitudes
    row_tol = tol / (1.0 + float(np.max(-log_p)))
    y_max = max(truncation_point(point.noise, lam, row_tol) for lam in means)
    if len(c) == 1 or point.eps_s == 0:
        return MiResult(0.0, 0.0, y_max)

    y = np.arange(y_max + 1)
    log_q = transition_logprob(point.noise, means[:, None], y)
    log_qbar = log_output_law(log_p, log_q)
    live = np.isfinite(log_qbar)
    d = log_q[:, live] - log_qbar[live]
    per_x = _phi(d) @ np.exp(log_qbar[live])
    nats = float(np.dot(p, per_x))

    tails = np.exp([log_tail_bound(point.noise, lam, y_max) for lam in means])
    budget = float(np.dot(p, tails * -log_p))
    return MiResult(nats, budget, y_max)


def flash_mi(p, eps_s):
    """Mutual information of noiseless flash signalling, inputs 0 and 1/p.

    With ``a = p (1 - exp(-eps_s/p))`` the probability of a nonzero count,
    ``I = -a log p - eps_s e^{-eps_s/p} - (1 - a) log(1 - a)``.
    """
    p = float(p)
    eps_s = float(eps_s)
    if not (0.0 < p <= 1.0):
        raise DomainError(f"flash probability must lie in (0, 1], got {p!r}")
    if eps_s < 0:
        raise DomainError(f"signal energy must be >= 0, got {eps_s!r}")
    if eps_s == 0 or p == 1.0:
        return 0.0
    a = -p * math.expm1(-eps_s / p)
    return -a * math.log(p) - eps_s * math.exp(-eps_s / p) - (1.0 - a) * math.log1p(-a)


@dataclass(frozen=True)
class LogEnergyPoint:
    """Signal energy stored as ``t = -log(eps_s)``; usable below 1e-308."""

    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError(f"t = -log(eps_s) must be positive, got {self.t!r}")

    @property
    def log10_eps_s(self):
        return -self.t / math.log(10.0)

    @classmethod
    def from_eps(cls, eps_s):
        return cls(-math.log(eps_s))


REMAINDER_LIMIT = 1e-6


def flash_ratio_logdomain(t, with_bound=False):
    """I_b(p) / (eps_s t) for ``p = eps_s t`` and ``eps_s = exp(-t)``.

    Substituting ``p = eps_s t`` gives ``eps_s/p = 1/t`` and, with
    ``g = 1 - e^{-1/t}`` and ``a = eps_s t g``,

        R = g (t - log t) - e^{-1/t}/t + g (1 - sum_{k>=2} a^{k-1} / (k (k-1))).

    ``a`` only enters through ``log a = -t + log t + log g``; the series is
    summed until its terms are negligible and the tail after the last kept term
    is bounded by ``g a^K / (K (K+1) (1 - a))``. A :class:`DomainError` is raised
    if that bound exceeds ``1e-6 * R``.
    """
    if isinstance(t, LogEnergyPoint):
        t = t.t
    t = float(t)
    if not t > 1.0:
        raise DomainError(f"log-domain flash ratio needs t > 1, got {t!r}")
    g = -math.expm1(-1.0 / t)
    log_a = -t + math.log(t) + math.log(g)
    head = g * (t - math.log(t)) - math.exp(-1.0 / t) / t + g

    series = 0.0
    k = 1
    while True:
        k += 1
        log_term = (k - 1) * log_a - math.log(k * (k - 1))
        if log_term < -745.0 or math.exp(log_term) < 1e-18 * abs(series or 1.0):
            break
        series += math.exp(log_term)
        if k > 200:
            break
    ratio = head - g * series
    # remainder after keeping terms 2..k-1: sum_{j>=k} a^{j-1}/(j(j-1))
    log_rem = math.log(g) + (k - 1) * log_a - math.log(k * (k - 1)) - math.log1p(-math.exp(log_a))
    remainder = math.exp(log_rem) if log_rem > -745.0 else 0.0
    if remainder > REMAINDER_LIMIT * abs(ratio):
        raise DomainError(f"series remainder {remainder:.3g} too large at t={t}")
    return (ratio, remainder) if with_bound else ratio


def flash_ratio_direct(t):
    """Same ratio as :func:`flash_ratio_logdomain`, evaluated through doubles.

    Only meaningful while ``exp(-t)`` is a normal double (t below ~708).
    """
    eps = math.exp(-t)
    return flash_mi(eps * t, eps) / (eps * t)


def flash_crossing(level=0.99, t_lo=2.0, t_hi=1e5):
    """Smallest-energy boundary ``t*`` where the log-domain flash ratio reaches ``level``.

    Returns ``t*``; the matching signal energy is ``exp(-t*)``.
    """
    f = lambda t: flash_ratio_logdomain(t) - level
    if f(t_lo) >= 0 or f(t_hi) <= 0:
        raise DomainError(f"level {level} is not bracketed on t in [{t_lo}, {t_hi}]")
    return brentq(f, t_lo, t_hi, xtol=1e-10, rtol=1e-14)
