import math

import pytest
from hypothesis import given, strategies as st

from poissonchan import (
    ChannelPoint,
    Constellation,
    DomainError,
    EmptyConstellation,
    GeometricNoise,
    InvalidProbability,
    NegativeAmplitude,
    Noiseless,
    PoissonNoise,
    ProbabilitySumMismatch,
    binary_flash,
    moments,
    read_constellation,
    validate,
)


def test_validate_two_point():
    c = validate([(0, 0.5), (2, 0.5)])
    assert c.x == (0.0, 2.0)
    assert moments(c).mu1 == 1.0


def test_validate_single_point():
    m = moments(validate([(1, 1.0)]))
    assert (m.mu1, m.mu2) == (1.0, 1.0)


def test_validate_sum_mismatch():
    with pytest.raises(ProbabilitySumMismatch):
        validate([(0, 0.6), (2, 0.5)])


def test_validate_errors():
    with pytest.raises(NegativeAmplitude):
        validate([(-1, 1.0)])
    with pytest.raises(EmptyConstellation):
        validate([])
    with pytest.raises(InvalidProbability):
        validate([(0, 1.5), (1, -0.5)])


def test_validate_sorts_and_merges():
    c = validate([(3, 0.25), (1, 0.25), (3, 0.5)])
    assert c.x == (1.0, 3.0)
    assert c.p == (0.25, 0.75)


def test_validate_drops_zero_mass():
    c = validate([(0, 0.0), (1, 1.0)])
    assert c.points == [(1.0, 1.0)]


@pytest.mark.parametrize(
    "c, mu1, mu2",
    [
        (binary_flash(0.1), 1.0, 10.0),
        (validate([(1, 1.0)]), 1.0, 1.0),
        (validate([(0, 0.5), (2, 0.5)]), 1.0, 2.0),
    ],
)
def test_moments(c, mu1, mu2):
    m = moments(c)
    assert m.mu1 == pytest.approx(mu1, rel=1e-15)
    assert m.mu2 == pytest.approx(mu2, rel=1e-15)


def test_noise_requires_positive_mean():
    with pytest.raises(DomainError):
        PoissonNoise(0.0)
    with pytest.raises(DomainError):
        GeometricNoise(-1.0)
    assert Noiseless().eps_n == 0.0


def test_channel_point_energy_nonnegative():
    with pytest.raises(DomainError):
        ChannelPoint(binary_flash(0.5), Noiseless(), -1e-3)


def test_read_constellation(tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("# two-point\n0 0.5\n\n2.0e0 5e-1  # upper level\n")
    assert read_constellation(f) == validate([(0, 0.5), (2, 0.5)])
    f.write_text("0 0.5 extra\n")
    with pytest.raises(ValueError, match=":1:"):
        read_constellation(f)


def _raw_constellations():
    weights = st.lists(st.floats(0.01, 1.0), min_size=1, max_size=8)
    return weights.flatmap(
        lambda w: st.tuples(
            st.lists(st.floats(0.0, 50.0), min_size=len(w), max_size=len(w)), st.just(w)
        )
    ).map(lambda xw: [(x, wi / math.fsum(xw[1])) for x, wi in zip(*xw)])


@given(_raw_constellations())
def test_jensen_on_moments(points):
    try:
        c = validate(points)
    except ProbabilitySumMismatch:
        return
    m = moments(c)
    assert m.mu2 >= m.mu1**2 * (1 - 1e-12)
    if len(c) == 1:
        assert m.mu2 == pytest.approx(m.mu1**2, rel=1e-15)


@given(_raw_constellations())
def test_validate_idempotent(points):
    try:
        c = validate(points)
    except ProbabilitySumMismatch:
        return
    assert validate(c) == c
    assert isinstance(c, Constellation)
