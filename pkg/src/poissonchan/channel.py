"""
Transition laws Q(y|x) of the discrete-time Poisson channel.

The output is ``Y = S + Z`` with ``S ~ Poisson(lam)``, ``lam = eps_s * x`` the
signal mean, and ``Z`` either absent, Poisson of mean ``eps_n`` or geometric
of mean ``eps_n``. Everything is evaluated in the log domain; linear
probabilities only appear when a :class:`TransitionRow` is materialized.

The output alphabet is infinite, so rows are truncated at ``y_max`` together
with an analytic upper bound on the neglected mass:

* Poisson(lam): for ``k + 2 > lam`` the ratio ``P(j+1)/P(j) = lam/(j+1)`` is at
  most ``r = lam/(k+2)`` for every ``j > k``, hence
  ``P(S > k) <= P(k+1) / (1 - r)``.
* Poisson signal plus geometric noise: ``S + Z > Y`` implies ``S > s`` or
  ``Z > Y - s`` for any split ``s``, and ``P(Z > m) = beta**(m+1)`` exactly with
  ``beta = eps_n/(1+eps_n)``. The bound is minimized over ``s``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp, xlogy

from .errors import check_tol
from .types import GeometricNoise, Noiseless, PoissonNoise


_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)


def _stirlerr(k):
    # log k! - [(k + 1/2) log k - k + log sqrt(2 pi)], for k >= 1
    k = np.asarray(k, dtype=float)
    out = np.empty_like(k)
    small = k <= 15
    ks = k[small]
    out[small] = gammaln(ks + 1.0) - (ks + 0.5) * np.log(ks) + ks - _HALF_LOG_2PI
    kl = k[~small]
    k2 = 1.0 / (kl * kl)
    out[~small] = (1.0 / 12 - (1.0 / 360 - (1.0 / 1260 - (1.0 / 1680 - k2 / 1188) * k2) * k2) * k2) / kl
    return out


def _bd0(k, lam):
    # k log(k/lam) + lam - k without cancellation when k is close to lam
    k = np.asarray(k, dtype=float)
    lam = np.asarray(lam, dtype=float)
    k, lam = np.broadcast_arrays(k, lam)
    out = np.empty(k.shape)
    near = np.abs(k - lam) < 0.1 * (k + lam)
    kn, ln = k[near], lam[near]
    v = (kn - ln) / (kn + ln)
    v2 = v * v
    acc = np.zeros_like(v)
    term = 2.0 * kn * v
    for j in range(1, 40):
        term = term * v2
        acc = acc + term / (2 * j + 1)
    out[near] = (kn - ln) * v + acc
    kf, lf = k[~near], lam[~near]
    out[~near] = xlogy(kf, kf / lf) + lf - kf
    return out


def poisson_log_pmf(k, lam):
    """log P(S = k) for S ~ Poisson(lam); ``-inf`` for impossible outcomes.

    Uses the saddle-point split ``-stirlerr(k) - bd0(k, lam) - log sqrt(2 pi k)``
    so the result keeps full relative accuracy for large counts.
    """
    k, lam = np.broadcast_arrays(np.asarray(k, dtype=float), np.asarray(lam, dtype=float))
    out = np.empty(k.shape)
    zero_k = k == 0
    out[zero_k] = -lam[zero_k]
    dead = (~zero_k) & (lam == 0)
    out[dead] = -np.inf
    live = (~zero_k) & (lam > 0)
    kl, ll = k[live], lam[live]
    out[live] = -_stirlerr(kl) - _bd0(kl, ll) - _HALF_LOG_2PI - 0.5 * np.log(kl)
    return out[()] if out.ndim == 0 else out


def geometric_log_pmf(k, eps_n):
    """log P(Z = k) for the geometric law on {0, 1, ...} with mean ``eps_n``."""
    k = np.asarray(k, dtype=float)
    out = -np.log1p(eps_n) - k * np.log1p(1.0 / eps_n)
    return out[()] if out.ndim == 0 else out


def _log_beta(eps_n):
    return -np.log1p(1.0 / eps_n)


def _geometric_convolution_logprob(lam, eps_n, y):
    # Q(y) = sum_{l<=y} e^{-lam} beta^y / (1+eps_n) * alpha^l / l!
    #      = e^{lam/eps_n} beta^y / (1+eps_n) * P(Poisson(alpha) <= y),
    # alpha = lam (1 + 1/eps_n). The inner sum is accumulated in log space
    # (running-maximum logaddexp) so terms spanning hundreds of decades stay exact.
    lam_b, y_b = np.broadcast_arrays(np.asarray(lam, dtype=float), np.asarray(y))
    ymax = int(y_b.max()) if y_b.size else 0
    means, which = np.unique(lam_b, return_inverse=True)
    alpha = means * (1.0 + 1.0 / eps_n)
    l = np.arange(ymax + 1, dtype=float)
    inner = np.logaddexp.accumulate(poisson_log_pmf(l, alpha[:, None]), axis=1)
    picked = inner[which.ravel(), y_b.ravel().astype(np.intp)].reshape(y_b.shape)
    return lam_b / eps_n - np.log1p(eps_n) + y_b * _log_beta(eps_n) + picked


def transition_logprob(noise, signal_mean, y):
    """log Q(y|x) for the given noise model and signal mean ``eps_s * x``.

    ``signal_mean`` and ``y`` broadcast against each other, so a
    ``(n, 1)`` column of means and a ``(m,)`` vector of outputs yield the
    full ``(n, m)`` matrix.
    """
    y = np.asarray(y)
    lam = np.asarray(signal_mean, dtype=float)
    if isinstance(noise, Noiseless):
        return poisson_log_pmf(y, lam)
    if isinstance(noise, PoissonNoise):
        return poisson_log_pmf(y, lam + noise.eps_n)
    if isinstance(noise, GeometricNoise):
        out = _geometric_convolution_logprob(lam, noise.eps_n, y)
        return out[()] if np.ndim(out) == 0 else out
    raise TypeError(f"unknown noise model {noise!r}")


# Certified truncation ------------------------------------------------------


def poisson_log_tail_bound(k, lam):
    """log of an upper bound on P(S > k), S ~ Poisson(lam); 0 when no bound applies."""
    if lam == 0:
        return -np.inf
    if k + 2 <= lam:
        return 0.0
    return min(0.0, float(poisson_log_pmf(k + 1, lam) - np.log1p(-lam / (k + 2))))


def _poisson_log_tail_bounds(s, lam):
    # vectorized poisson_log_tail_bound over integer array s
    s = np.asarray(s, dtype=float)
    if lam == 0:
        return np.full(s.shape, -np.inf)
    out = np.zeros(s.shape)
    ok = s + 2 > lam
    so = s[ok]
    out[ok] = np.minimum(0.0, poisson_log_pmf(so + 1, lam) - np.log1p(-lam / (so + 2)))
    return out


def log_tail_bound(noise, signal_mean, y_max):
    """log of a certified upper bound on sum_{y > y_max} Q(y|x)."""
    lam = float(signal_mean)
    if isinstance(noise, Noiseless):
        return poisson_log_tail_bound(y_max, lam)
    if isinstance(noise, PoissonNoise):
        return poisson_log_tail_bound(y_max, lam + noise.eps_n)
    if isinstance(noise, GeometricNoise):
        s = np.arange(y_max + 1)
        zpart = (y_max - s + 1) * _log_beta(noise.eps_n)
        if lam == 0:
            return float(zpart[0])
        return float(min(0.0, np.min(np.logaddexp(_poisson_log_tail_bounds(s, lam), zpart))))
    raise TypeError(f"unknown noise model {noise!r}")


def tail_bound(noise, signal_mean, y_max):
    return float(np.exp(log_tail_bound(noise, signal_mean, y_max)))


def truncation_point(noise, signal_mean, tol):
    """Smallest ``y_max`` whose certified tail bound is below ``tol``.

    The bound is nonincreasing in ``y_max``, so the result is monotone in
    ``tol``: loosening the tolerance never lengthens the row.
    """
    tol = check_tol(tol)
    lam = float(signal_mean)
    if isinstance(noise, Noiseless) and lam == 0:
        return 0
    log_tol = np.log(tol)

    def ok(k):
        return log_tail_bound(noise, lam, k) < log_tol

    hi = max(1, int(np.ceil(lam + noise.eps_n)))
    while not ok(hi):
        hi *= 2
    lo = -1  # ok(lo) treated as False
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class TransitionRow:
    signal_mean: float
    y_max: int
    probs: np.ndarray
    tail_bound: float


def transition_row(noise, signal_mean, tol) -> TransitionRow:
    """Truncated row of Q(.|x) with certified tail mass below ``tol``."""
    y_max = truncation_point(noise, signal_mean, tol)
    logp = transition_logprob(noise, signal_mean, np.arange(y_max + 1))
    probs = np.exp(np.atleast_1d(logp))
    probs.setflags(write=False)
    return TransitionRow(float(signal_mean), y_max, probs, tail_bound(noise, signal_mean, y_max))


def log_output_law(log_p, log_q):
    """log of Qbar(y) = sum_x P(x) Q(y|x) from ``(n,)`` log-probs and ``(n, m)`` log-rows."""
    return logsumexp(np.asarray(log_p)[:, None] + log_q, axis=0)
