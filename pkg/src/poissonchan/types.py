"""
Shared domain vocabulary: constellations, noise models and operating points.

All objects are frozen dataclasses; amplitudes and probabilities are stored as
tuples so that a value can be hashed and shared freely between threads.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Tuple, Union

import numpy as np

from .errors import (
    DomainError,
    EmptyConstellation,
    InvalidProbability,
    NegativeAmplitude,
    ProbabilitySumMismatch,
)

PROB_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Moments:
    mu1: float
    mu2: float


@dataclass(frozen=True)
class Constellation:
    """Finite input alphabet with its probability mass function.

    Build instances through :func:`validate` (or the generators in
    :mod:`poissonchan.constellations`); the constructor does not canonicalize.
    Amplitudes are in unit-energy scale: the channel sees ``eps_s * x``.
    """

    x: Tuple[float, ...]
    p: Tuple[float, ...]

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array(self.x, dtype=float)

    @property
    def probs(self) -> np.ndarray:
        return np.array(self.p, dtype=float)

    @property
    def points(self):
        return list(zip(self.x, self.p))

    def __len__(self):
        return len(self.x)

    def moments(self) -> Moments:
        return moments(self)


def validate(points: Union[Constellation, Iterable[Tuple[float, float]]]) -> Constellation:
    """Canonicalize a list of ``(x, p)`` pairs into a :class:`Constellation`.

    Points are sorted by amplitude, duplicate amplitudes are merged by summing
    their probabilities and zero-probability points are dropped.

    Raises
    ------
    NegativeAmplitude, InvalidProbability, ProbabilitySumMismatch, EmptyConstellation
    """
    if isinstance(points, Constellation):
        points = points.points
    merged = {}
    for x, p in points:
        x = float(x)
        p = float(p)
        if not math.isfinite(x) or x < 0:
            raise NegativeAmplitude(f"amplitude must be finite and >= 0, got {x!r}")
        if not math.isfinite(p) or p < 0 or p > 1:
            raise InvalidProbability(f"probability must lie in [0, 1], got {p!r}")
        merged.setdefault(x, []).append(p)
    if not merged:
        raise EmptyConstellation("constellation has no points")
    total = math.fsum(p for ps in merged.values() for p in ps)
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise ProbabilitySumMismatch(f"probabilities sum to {total!r}, not 1")
    xs, ps = [], []
    for x in sorted(merged):
        p = math.fsum(merged[x])
        if p > 0:
            xs.append(x)
            ps.append(p)
    if not xs:
        raise EmptyConstellation("constellation has no point of positive probability")
    return Constellation(tuple(xs), tuple(ps))


def moments(constellation: Constellation) -> Moments:
    mu1 = math.fsum(p * x for x, p in zip(constellation.x, constellation.p))
    mu2 = math.fsum(p * x * x for x, p in zip(constellation.x, constellation.p))
    return Moments(mu1, mu2)


def read_constellation(path) -> Constellation:
    """Read a constellation from a text file of ``x p`` lines.

    ``#`` starts a comment; blank lines are ignored.
    """
    pairs = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'x p', got {line!r}")
        try:
            pairs.append((float(fields[0]), float(fields[1])))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: cannot parse numbers in {line!r}") from None
    return validate(pairs)


# Noise models -------------------------------------------------------------


@dataclass(frozen=True)
class Noiseless:
    @property
    def eps_n(self):
        return 0.0


@dataclass(frozen=True)
class PoissonNoise:
    eps_n: float

    def __post_init__(self):
        if not (self.eps_n > 0 and math.isfinite(self.eps_n)):
            raise DomainError(f"Poisson noise mean must be positive, got {self.eps_n!r}")


@dataclass(frozen=True)
class GeometricNoise:
    eps_n: float

    def __post_init__(self):
        if not (self.eps_n > 0 and math.isfinite(self.eps_n)):
            raise DomainError(f"geometric noise mean must be positive, got {self.eps_n!r}")


NoiseModel = Union[Noiseless, PoissonNoise, GeometricNoise]


@dataclass(frozen=True)
class ChannelPoint:
    constellation: Constellation
    noise: NoiseModel
    eps_s: float

    def __post_init__(self):
        if not (self.eps_s >= 0 and math.isfinite(self.eps_s)):
            raise DomainError(f"signal energy must be finite and >= 0, got {self.eps_s!r}")
