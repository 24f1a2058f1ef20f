import math

import numpy as np
import pytest
from scipy import stats

from poissonchan import (
    GeometricNoise,
    Noiseless,
    PoissonNoise,
    ToleranceOutOfRange,
    geometric_log_pmf,
    poisson_log_pmf,
    transition_logprob,
    transition_row,
)
from poissonchan.channel import log_tail_bound, truncation_point


def convolution_oracle(lam, eps_n, y_max):
    """Pois(lam) * Geom(mean eps_n) by direct linear-domain convolution."""
    s = np.arange(y_max + 1)
    pois = stats.poisson.pmf(s, lam) if lam > 0 else (s == 0).astype(float)
    beta = eps_n / (1 + eps_n)
    geom = (1 - beta) * beta**s
    return np.convolve(pois, geom)[: y_max + 1]


def test_poisson_log_pmf_values():
    assert poisson_log_pmf(0, 0.0) == 0.0
    assert poisson_log_pmf(3, 0.0) == -math.inf
    assert poisson_log_pmf(1, 1.0) == pytest.approx(-1.0, abs=1e-15)
    # extended-precision value of log(e^-2.5 2.5^5 / 120)
    assert poisson_log_pmf(5, 2.5) == pytest.approx(-2.706038083411270668, rel=1e-15)


@pytest.mark.parametrize("lam", [1e-5, 0.3, 7.0, 99.5])
def test_poisson_log_pmf_matches_scipy(lam):
    k = np.arange(0, int(lam + 20 * math.sqrt(lam) + 30))
    ref = stats.poisson.logpmf(k, lam)
    got = poisson_log_pmf(k, lam)
    live = ref > -700
    assert np.allclose(got[live], ref[live], rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("k, lam", [(10000, 1e4), (10400, 1e4), (9500, 1e4), (2, 1e4), (250000, 2.5e5)])
def test_poisson_log_pmf_large_counts(k, lam):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    ref = -mpmath.mpf(lam) + k * mpmath.log(lam) - mpmath.loggamma(k + 1)
    assert poisson_log_pmf(k, lam) == pytest.approx(float(ref), rel=1e-15, abs=1e-13)


def test_geometric_log_pmf():
    assert geometric_log_pmf(0, 1.0) == pytest.approx(math.log(0.5), abs=1e-15)
    assert geometric_log_pmf(3, 0.5) == pytest.approx(-3.701301974112493456, rel=1e-15)
    k = np.arange(0, 200)
    pmf = np.exp(geometric_log_pmf(k, 2.0))
    assert 1 - pmf.sum() < 1e-14
    assert math.fsum(k * pmf) == pytest.approx(2.0, abs=1e-10)


def test_transition_noiseless_zero_input():
    assert transition_logprob(Noiseless(), 0.0, 0) == 0.0


def test_transition_poisson_noise_is_shifted_poisson():
    y = np.arange(30)
    got = np.exp(transition_logprob(PoissonNoise(1.0), 1.0, y))
    assert np.allclose(got, stats.poisson.pmf(y, 2.0), rtol=1e-13, atol=0)


@pytest.mark.parametrize("lam", [0.0, 0.1, 0.5, 1.0, 5.0])
@pytest.mark.parametrize("eps_n", [0.25, 1.0, 4.0])
def test_geometric_matches_convolution(lam, eps_n):
    y = np.arange(61)
    got = np.exp(transition_logprob(GeometricNoise(eps_n), lam, y))
    assert np.max(np.abs(got - convolution_oracle(lam, eps_n, 60))) <= 1e-12


def test_degenerate_zero_signal():
    y = np.arange(40)
    assert np.allclose(
        transition_logprob(PoissonNoise(0.7), 0.0, y), stats.poisson.logpmf(y, 0.7), rtol=1e-13
    )
    assert np.allclose(
        transition_logprob(GeometricNoise(0.7), 0.0, y), geometric_log_pmf(y, 0.7), rtol=1e-13
    )


def test_transition_broadcasts_to_matrix():
    means = np.array([[0.0], [0.4], [2.0]])
    y = np.arange(12)
    for noise in (Noiseless(), PoissonNoise(0.5), GeometricNoise(0.5)):
        mat = transition_logprob(noise, means, y)
        assert mat.shape == (3, 12)
        for i, lam in enumerate(means[:, 0]):
            assert np.array_equal(mat[i], transition_logprob(noise, lam, y))


def test_row_noiseless_zero():
    row = transition_row(Noiseless(), 0.0, 1e-3)
    assert row.y_max == 0
    assert list(row.probs) == [1.0]
    assert row.tail_bound == 0.0


@pytest.mark.parametrize(
    "noise, lam, tol",
    [(GeometricNoise(1.0), 1.0, 1e-12), (PoissonNoise(1.0), 2.0, 1e-10)],
)
def test_row_sums(noise, lam, tol):
    row = transition_row(noise, lam, tol)
    assert math.fsum(row.probs) >= 1 - tol
    assert row.tail_bound < tol


NOISES = [Noiseless(), PoissonNoise(0.5), PoissonNoise(3.0), GeometricNoise(0.25), GeometricNoise(4.0)]


@pytest.mark.parametrize("noise", NOISES)
@pytest.mark.parametrize("lam", [0.0, 1e-6, 0.2, 3.0, 40.0, 500.0])
@pytest.mark.parametrize("tol", [1e-3, 1e-8, 1e-12])
def test_row_normalization(noise, lam, tol):
    row = transition_row(noise, lam, tol)
    total = math.fsum(row.probs)
    assert np.all((row.probs >= 0) & (row.probs <= 1))
    assert total <= 1 + 1e-12
    assert total + row.tail_bound >= 1 - 1e-12
    assert row.tail_bound < tol


@pytest.mark.parametrize("noise", NOISES)
@pytest.mark.parametrize("lam", [0.2, 3.0, 40.0])
def test_tail_bound_is_certified(noise, lam):
    # the bound must dominate the exact tail mass, computed far beyond y_max
    y_max = truncation_point(noise, lam, 1e-6)
    far = truncation_point(noise, lam, 1e-30)
    probs = np.exp(transition_logprob(noise, lam, np.arange(far + 1)))
    exact_tail = math.fsum(probs[y_max + 1 :])
    assert exact_tail <= math.exp(log_tail_bound(noise, lam, y_max))


@pytest.mark.parametrize("noise", NOISES)
@pytest.mark.parametrize("lam", [0.0, 0.5, 12.0])
def test_truncation_monotone_in_tol(noise, lam):
    tols = [1e-14, 1e-10, 1e-6, 1e-3, 0.1, 0.5]
    ys = [truncation_point(noise, lam, t) for t in tols]
    assert ys == sorted(ys, reverse=True)


@pytest.mark.parametrize("tol", [0.0, 1.0, -1e-3, 2.0])
def test_row_rejects_bad_tol(tol):
    with pytest.raises(ToleranceOutOfRange):
        transition_row(Noiseless(), 1.0, tol)
