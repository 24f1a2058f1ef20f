"""Exception hierarchy shared by every module of the package."""


class PoissonChannelError(ValueError):
    """Base class for all errors raised by :mod:`poissonchan`."""


class NegativeAmplitude(PoissonChannelError):
    pass


class InvalidProbability(PoissonChannelError):
    pass


class ProbabilitySumMismatch(PoissonChannelError):
    pass


class EmptyConstellation(PoissonChannelError):
    pass


class DegenerateConstellation(PoissonChannelError):
    """All probability mass sits at zero amplitude, so the mean energy is zero."""


class DomainError(PoissonChannelError):
    pass


class ToleranceOutOfRange(PoissonChannelError):
    pass


class GridTooCoarse(PoissonChannelError):
    pass


def check_tol(tol):
    if not (0.0 < tol < 1.0):
        raise ToleranceOutOfRange(f"tolerance must lie in (0, 1), got {tol!r}")
    return float(tol)
