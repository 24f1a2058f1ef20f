"""Named input ensembles: uniform 2^m-PEM and binary flash signalling."""

import sys
from fractions import Fraction

from .errors import DegenerateConstellation, DomainError
from .types import Constellation, moments, validate

MAX_PEM_BITS = 16


def uniform_pem(m: int) -> Constellation:
    """Uniform pulse-energy modulation with ``2**m`` equiprobable levels.

    The levels are ``x_k = 2k / (2**m - 1)``, spanning [0, 2] with unit mean.
    """
    if not (isinstance(m, int) and 1 <= m <= MAX_PEM_BITS):
        raise DomainError(f"PEM order m must be an integer in [1, {MAX_PEM_BITS}], got {m!r}")
    n = 2**m
    levels = [Fraction(2 * k, n - 1) for k in range(n)]
    assert sum(levels) / n == 1
    return validate([(float(x), 1.0 / n) for x in levels])


def binary_flash(p: float) -> Constellation:
    """Inputs {0, 1/p} used with probabilities {1-p, p}; unit mean energy."""
    p = float(p)
    if not (0.0 < p <= 1.0):
        raise DomainError(f"flash probability must lie in (0, 1], got {p!r}")
    return validate([(0.0, 1.0 - p), (1.0 / p, p)])


def normalize_unit_energy(c: Constellation) -> Constellation:
    """Rescale amplitudes by 1/mu1.

    The mutual information of the result at energy ``eps_s`` equals that of
    ``c`` at ``eps_s / mu1``, since only the products ``eps_s * x`` matter.
    """
    mu1 = moments(c).mu1
    if mu1 <= 0:
        raise DegenerateConstellation("cannot normalize a constellation with zero mean energy")
    if abs(mu1 - 1.0) <= 4 * sys.float_info.epsilon:
        return c
    return validate([(x / mu1, p) for x, p in zip(c.x, c.p)])
