"""Reproducible generators for the simulated data designs, plus distribution
utilities (normal survival/quantile, Student-t survival) used by the z-scale
pipeline.

Determinism contract: identical (seed, spec, L) produce bit-identical output.
Replicate streams are derived with `numpy.random.SeedSequence(seed, spawn_key=
(replicate,))`, so replicate r's stream does not depend on execution order;
this is what makes parallel Monte-Carlo runs reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy import special

from nullfreq.errors import ConfigError, DomainError
from nullfreq.model import MixtureComponents, NullParams

__all__ = [
    "Fixed",
    "MixtureSpec",
    "MixtureTruth",
    "Normal",
    "RngSeed",
    "Uniform",
    "generate",
    "generate_dependent",
    "normal_quantile",
    "normal_survival",
    "student_t_survival",
]


# ---------------------------------------------------------------------------
# distribution descriptors for the non-null (mu_j, sigma_j) draws


@dataclass(frozen=True)
class Fixed:
    value: float

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.full(size, self.value)

    @property
    def minimum(self) -> float:
        return self.value


@dataclass(frozen=True)
class Normal:
    mean: float
    sd: float

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return self.mean + self.sd * rng.standard_normal(size)

    @property
    def minimum(self) -> float:
        return -np.inf


@dataclass(frozen=True)
class Uniform:
    low: float
    high: float

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.uniform(self.low, self.high, size)

    @property
    def minimum(self) -> float:
        return self.low


Descriptor = Fixed | Normal | Uniform


@dataclass(frozen=True)
class MixtureSpec:
    """Configuration of one simulated mixture data set.

    The frequentist model draws exactly round(n * epsilon) non-null samples with
    fixed per-sample (mu_j, sigma_j); the bayesian model labels each sample
    non-null independently with probability epsilon.
    """

    n: int
    epsilon: float
    null: NullParams
    nonnull_mu: Descriptor = field(default_factory=lambda: Normal(0.0, 1.0))
    nonnull_sigma: Descriptor = field(default_factory=lambda: Uniform(1.0, 1.5))
    model: Literal["frequentist", "bayesian"] = "frequentist"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if not 0.0 <= self.epsilon < 0.5:
            raise ConfigError(f"epsilon must be in [0, 1/2), got {self.epsilon}")
        if self.model not in ("frequentist", "bayesian"):
            raise ConfigError(f"unknown model {self.model!r}")
        if self.nonnull_sigma.minimum < self.null.sigma0 - 1e-12:
            raise ConfigError(
                "eligibility violated: nonnull sigma support extends below "
                f"sigma0 = {self.null.sigma0:.6g}"
            )


@dataclass(frozen=True)
class RngSeed:
    """Base seed plus a replicate index mixed in as a spawn key."""

    seed: int
    replicate: int = 0

    def rng(self) -> np.random.Generator:
        key = (self.replicate,) if self.replicate else ()
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=key))


@dataclass(frozen=True)
class MixtureTruth:
    """Per-sample ground truth produced by the generators."""

    mu: np.ndarray
    sigma: np.ndarray
    is_null: np.ndarray

    @property
    def n(self) -> int:
        return self.is_null.size

    @property
    def epsilon_n(self) -> float:
        """Realized proportion of non-null effects."""
        return float(np.count_nonzero(~self.is_null)) / self.n

    def tau_n(self, null: NullParams) -> float:
        """Minimum elevation of the variance, min over non-null of sigma_j^2 - sigma0^2."""
        nonnull_sigma = self.sigma[~self.is_null]
        if nonnull_sigma.size == 0:
            return float("inf")
        return float(np.min(nonnull_sigma**2) - null.sigma0_sq)

    def components(self, null: NullParams) -> MixtureComponents:
        """The analytic mixture implied by this truth (one component per non-null draw)."""
        nn = ~self.is_null
        return MixtureComponents(
            null=null,
            n_null=int(np.count_nonzero(self.is_null)),
            nonnull=tuple(zip(self.mu[nn].tolist(), self.sigma[nn].tolist())),
        )


def _draw_truth(spec: MixtureSpec, rng: np.random.Generator) -> MixtureTruth:
    n = spec.n
    if spec.model == "frequentist":
        # round(n * eps) half-up, so e.g. n=5, eps=0.1 gives 1 non-null
        k = int(np.floor(n * spec.epsilon + 0.5))
    else:
        k = int(np.count_nonzero(rng.random(n) < spec.epsilon))
    mu = np.full(n, spec.null.mu0)
    sigma = np.full(n, spec.null.sigma0)
    is_null = np.ones(n, dtype=bool)
    if k > 0:
        mu[:k] = spec.nonnull_mu.draw(rng, k)
        sigma[:k] = spec.nonnull_sigma.draw(rng, k)
        is_null[:k] = False
    return MixtureTruth(mu=mu, sigma=sigma, is_null=is_null)


def generate(spec: MixtureSpec, seed: RngSeed) -> tuple[np.ndarray, MixtureTruth]:
    """Generate one independent data set: X_j ~ N(mu_j, sigma_j^2)."""
    return generate_dependent(spec, 0, seed)


def generate_dependent(
    spec: MixtureSpec, L: int, seed: RngSeed
) -> tuple[np.ndarray, MixtureTruth]:
    """Generate block-wise dependent data.

    Draws n + L standard normals w and sets z_j = (sum_{k=j}^{j+L} w_k) / sqrt(L+1),
    so each z_j is marginally N(0, 1) with block dependence of range L, then
    X_j = mu_j + sigma_j * z_j. L = 0 consumes the same normal stream as the
    independent generator, so the two coincide exactly.
    """
    if L < 0:
        raise ConfigError(f"L must be >= 0, got {L}")
    rng = seed.rng()
    truth = _draw_truth(spec, rng)
    w = rng.standard_normal(spec.n + L)
    if L == 0:
        z = w
    else:
        csum = np.concatenate(([0.0], np.cumsum(w)))
        z = (csum[L + 1 :] - csum[: spec.n]) / np.sqrt(L + 1.0)
    x = truth.mu + truth.sigma * z
    return x, truth


# ---------------------------------------------------------------------------
# distribution utilities for the z-scale pipeline


def normal_survival(x: "float | np.ndarray") -> "float | np.ndarray":
    """Standard normal survival function via the complementary error function."""
    out = 0.5 * special.erfc(np.asarray(x, dtype=float) / np.sqrt(2.0))
    return float(out) if np.isscalar(x) or np.asarray(x).ndim == 0 else out


def normal_quantile(p: "float | np.ndarray") -> "float | np.ndarray":
    """Inverse of the standard normal survival function on (0, 1)."""
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr <= 0.0) or np.any(p_arr >= 1.0):
        raise DomainError("p must lie strictly inside (0, 1)")
    out = -special.ndtri(p_arr)
    return float(out) if np.isscalar(p) or p_arr.ndim == 0 else out


def student_t_survival(x: "float | np.ndarray", df: int) -> "float | np.ndarray":
    """Survival function of the Student-t distribution with `df` degrees of freedom.

    Computed as the CDF at -x (symmetry), which scipy evaluates through the
    regularized incomplete beta function; accurate in both tails.
    """
    if df < 1:
        raise DomainError(f"df must be >= 1, got {df}")
    out = special.stdtr(df, -np.asarray(x, dtype=float))
    return float(out) if np.isscalar(x) or np.asarray(x).ndim == 0 else out
