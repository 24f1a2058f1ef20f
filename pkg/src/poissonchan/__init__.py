"""Mutual information, low-energy asymptotics and energy per bit of the
discrete-time Poisson channel with no, Poisson or geometric additive noise."""

from .asymptotics import (
    EmpiricalFit,
    ExpansionCoefficients,
    coefficients,
    coeffs_noiseless,
    coeffs_noisy,
    expansion_eval,
    extract_coeffs_empirical,
)
from .capacity import (
    BestOverGrid,
    CapacityBracket,
    FixedP,
    PEqualsEps,
    PEqualsMinusEpsLogEps,
    capacity_bracket,
    capacity_upper_bound,
    flash_lower_bound,
)
from .channel import (
    TransitionRow,
    geometric_log_pmf,
    poisson_log_pmf,
    transition_logprob,
    transition_row,
)
from .constellations import binary_flash, normalize_unit_energy, uniform_pem
from .errors import (
    DegenerateConstellation,
    DomainError,
    EmptyConstellation,
    GridTooCoarse,
    InvalidProbability,
    NegativeAmplitude,
    PoissonChannelError,
    ProbabilitySumMismatch,
    ToleranceOutOfRange,
)
from .mi import (
    LogEnergyPoint,
    MiResult,
    flash_crossing,
    flash_mi,
    flash_ratio_logdomain,
    mutual_information,
)
from .types import (
    ChannelPoint,
    Constellation,
    GeometricNoise,
    Moments,
    Noiseless,
    PoissonNoise,
    moments,
    read_constellation,
    validate,
)
from .unitcost import (
    DivergenceCurvePoint,
    UnitCostResult,
    capacity_per_unit_cost,
    divergence_geometric_noise,
    divergence_poisson_noise,
    energy_per_bit,
    geometric_divergence_rate_limit,
)

__version__ = "0.1.0"
