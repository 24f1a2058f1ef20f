import math

import numpy as np
import pytest

from poissonchan import (
    ChannelPoint,
    DomainError,
    GeometricNoise,
    LogEnergyPoint,
    Noiseless,
    PoissonNoise,
    ToleranceOutOfRange,
    binary_flash,
    flash_mi,
    flash_ratio_logdomain,
    mutual_information,
    uniform_pem,
    validate,
)
from poissonchan.channel import transition_logprob, truncation_point
from poissonchan.mi import flash_crossing, flash_ratio_direct

NOISES = [Noiseless(), PoissonNoise(1.0), GeometricNoise(1.0)]


def textbook_mi(constellation, noise, eps_s, tol=1e-16):
    """sum P(x) Q(y|x) log(Q(y|x)/Qbar(y)) over a long linear-domain table."""
    means = eps_s * constellation.amplitudes
    y_max = max(truncation_point(noise, lam, tol) for lam in means)
    q = np.exp(transition_logprob(noise, means[:, None], np.arange(y_max + 1)))
    p = constellation.probs
    qbar = p @ q
    total = 0.0
    for i in range(len(p)):
        live = q[i] > 0
        total += p[i] * np.sum(q[i, live] * np.log(q[i, live] / qbar[live]))
    return total


@pytest.mark.parametrize("noise", NOISES)
def test_single_point_is_zero(noise):
    res = mutual_information(ChannelPoint(validate([(1.3, 1.0)]), noise, 0.7))
    assert res.nats == 0.0


@pytest.mark.parametrize("noise", NOISES)
def test_zero_energy_is_zero(noise):
    assert mutual_information(ChannelPoint(uniform_pem(2), noise, 0.0)).nats == 0.0


def test_flash_closed_form_agrees():
    got = mutual_information(ChannelPoint(binary_flash(0.1), Noiseless(), 0.01)).nats
    # extended-precision value of the flash closed form
    assert got == pytest.approx(0.022334454377055104366, abs=1e-9)
    assert flash_mi(0.1, 0.01) == pytest.approx(0.022334454377055104366, rel=1e-14)


@pytest.mark.parametrize("p", [0.5, 0.1, 0.01])
@pytest.mark.parametrize("eps", [1e-4, 1e-2, 0.1])
def test_generic_equals_flash(p, eps):
    res = mutual_information(ChannelPoint(binary_flash(p), Noiseless(), eps))
    assert abs(res.nats - flash_mi(p, eps)) <= 1e-8


@pytest.mark.parametrize("noise", NOISES)
@pytest.mark.parametrize("eps", [0.05, 0.8, 4.0])
def test_generic_equals_textbook_sum(noise, eps):
    c = uniform_pem(2)
    got = mutual_information(ChannelPoint(c, noise, eps)).nats
    assert got == pytest.approx(textbook_mi(c, noise, eps), rel=1e-10, abs=1e-15)


@pytest.mark.parametrize("noise", NOISES)
@pytest.mark.parametrize("tol", [1e-4, 1e-8, 1e-12])
def test_budget_and_nonnegativity(noise, tol):
    for eps in np.geomspace(1e-4, 5.0, 7):
        res = mutual_information(ChannelPoint(uniform_pem(3), noise, eps), tol)
        assert res.error_budget <= tol
        assert res.nats >= -res.error_budget


@pytest.mark.parametrize("noise", NOISES)
def test_budget_bounds_truncation_error(noise):
    c = uniform_pem(2)
    point = ChannelPoint(c, noise, 1.5)
    loose = mutual_information(point, 1e-3)
    tight = mutual_information(point, 1e-15)
    assert 0 <= tight.nats - loose.nats <= loose.error_budget


@pytest.mark.parametrize("noise", NOISES)
def test_nondecreasing_in_energy(noise):
    vals = [
        mutual_information(ChannelPoint(uniform_pem(2), noise, e)).nats
        for e in np.geomspace(1e-4, 1.0, 25)
    ]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_permutation_invariance():
    pts = [(0, 0.2), (1.5, 0.3), (0.4, 0.1), (3.0, 0.4)]
    a = mutual_information(ChannelPoint(validate(pts), GeometricNoise(0.5), 0.3))
    b = mutual_information(ChannelPoint(validate(pts[::-1]), GeometricNoise(0.5), 0.3))
    assert a == b


def test_bad_tolerance():
    with pytest.raises(ToleranceOutOfRange):
        mutual_information(ChannelPoint(uniform_pem(1), Noiseless(), 0.1), 1.0)


def test_flash_p1_is_zero():
    for eps in (1e-6, 0.5, 3.0):
        assert flash_mi(1.0, eps) == 0.0


@pytest.mark.parametrize("p", [0.0, 1.01, -0.2])
def test_flash_domain(p):
    with pytest.raises(DomainError):
        flash_mi(p, 0.1)


@pytest.mark.parametrize("p", [0.5, 0.1, 0.01])
def test_flash_slope_at_zero(p):
    assert flash_mi(p, 1e-9) / 1e-9 == pytest.approx(-math.log(p), rel=1e-6)


def test_logdomain_tends_to_one():
    rs = [flash_ratio_logdomain(t) for t in (10, 100, 1e3, 1e4, 1e6)]
    assert rs == sorted(rs)
    assert 1 - rs[-1] < 2e-5


@pytest.mark.parametrize("t", [3.0, 8.0, 15.0, 27.6, 60.0, 200.0, 450.0, 600.0])
def test_logdomain_matches_direct(t):
    assert flash_ratio_logdomain(t) == pytest.approx(flash_ratio_direct(t), rel=1e-8)


def test_logdomain_at_picoscale():
    eps = 1e-12
    t = -math.log(eps)
    direct = flash_mi(eps * t, eps) / (eps * t)
    assert abs(flash_ratio_logdomain(t) - direct) <= 1e-9


def test_logdomain_remainder_reported():
    r, bound = flash_ratio_logdomain(1e3, with_bound=True)
    assert 0 <= bound < 1e-300


def test_logdomain_accepts_point_and_rejects_small_t():
    assert flash_ratio_logdomain(LogEnergyPoint(50.0)) == flash_ratio_logdomain(50.0)
    with pytest.raises(DomainError):
        flash_ratio_logdomain(1.0)
    with pytest.raises(DomainError):
        LogEnergyPoint(0.0)


def test_crossing_location():
    t_star = flash_crossing(0.99)
    assert flash_ratio_logdomain(t_star) == pytest.approx(0.99, abs=1e-12)
    assert abs(LogEnergyPoint(t_star).log10_eps_s - (-307)) < 1
