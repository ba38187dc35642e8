"""Empirical-characteristic-function estimation of a Gaussian null distribution
and of the proportion of non-null effects, with a Monte-Carlo experiment harness
and multiple-testing utilities."""

from nullfreq.charfn import (
    MixtureComponents,
    ecf,
    ecf_derivative,
    gaussian_cf,
    mixture_cf,
    psi,
)
from nullfreq.errors import (
    ConfigError,
    DegenerateEstimateError,
    DomainError,
    EstimationError,
    FrequencyNotFoundError,
    NullfreqError,
)
from nullfreq.null_estimation import (
    FrequencyChoice,
    NullParams,
    estimate_null,
    mu0_functional,
    oracle_frequency,
    select_frequency,
    sigma0_functional,
)
from nullfreq.proportion import (
    ProportionEstimate,
    estimate_proportion,
    estimate_proportion_plugin,
    omega_n,
)

__all__ = [
    "ConfigError",
    "DegenerateEstimateError",
    "DomainError",
    "EstimationError",
    "FrequencyChoice",
    "FrequencyNotFoundError",
    "MixtureComponents",
    "NullParams",
    "NullfreqError",
    "ProportionEstimate",
    "ecf",
    "ecf_derivative",
    "estimate_null",
    "estimate_proportion",
    "estimate_proportion_plugin",
    "gaussian_cf",
    "mixture_cf",
    "mu0_functional",
    "omega_n",
    "oracle_frequency",
    "psi",
    "select_frequency",
    "sigma0_functional",
]

__version__ = "0.1.0"
