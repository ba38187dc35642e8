"""Core domain types: null parameters, mixture descriptions, sample validation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from nullfreq.errors import DomainError


@dataclass(frozen=True)
class NullParams:
    """Parameters (mu0, sigma0^2) of the Gaussian null distribution on the z-scale."""

    mu0: float
    sigma0_sq: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.mu0) or not np.isfinite(self.sigma0_sq):
            raise DomainError("null parameters must be finite")
        if self.sigma0_sq <= 0:
            raise DomainError(f"sigma0_sq must be positive, got {self.sigma0_sq}")

    @property
    def sigma0(self) -> float:
        return float(np.sqrt(self.sigma0_sq))


@dataclass(frozen=True)
class MixtureComponents:
    """A finite Gaussian mixture: the null component plus the non-null (mu_j, sigma_j) list.

    Each non-null entry carries weight 1/n, n = n_null + len(nonnull); this treats
    every generated non-null draw as one component, matching the frequentist model.
    """

    null: NullParams
    n_null: int
    nonnull: tuple[tuple[float, float], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.n_null < 0:
            raise DomainError("n_null must be >= 0")
        if self.n == 0:
            raise DomainError("mixture must have at least one component")
        sigma0 = self.null.sigma0
        for mu_j, sigma_j in self.nonnull:
            if sigma_j < sigma0 - 1e-12:
                raise DomainError(
                    f"eligibility violated: sigma_j={sigma_j} < sigma0={sigma0}"
                )
        if self.epsilon_n >= 0.5:
            raise DomainError(
                f"non-null fraction {self.epsilon_n} >= 1/2 breaks identifiability"
            )

    @property
    def n(self) -> int:
        return self.n_null + len(self.nonnull)

    @property
    def epsilon_n(self) -> float:
        return len(self.nonnull) / self.n


def as_sample(values: "np.typing.ArrayLike") -> np.ndarray:
    """Validate and return a sample of z-scores as a 1-d float array (n >= 1)."""
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        x = x.reshape(-1)
    if x.size == 0:
        raise DomainError("sample must contain at least one value")
    if not np.all(np.isfinite(x)):
        raise DomainError("sample contains non-finite values")
    return x
