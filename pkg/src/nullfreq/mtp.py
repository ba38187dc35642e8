"""Multiple-testing plumbing: one-sided p-values, Benjamini-Hochberg step-up
control, and confusion counting against generator ground truth.

P-values here are one-sided upper tail, p_j = Phi_bar((X_j - mu0) / sigma0).
That matches the misspecified-null demonstration, where the non-null effects
shift upward; note the two-sided convention common in microarray pipelines is
deliberately not used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from nullfreq.datagen import MixtureTruth, normal_survival
from nullfreq.errors import DomainError
from nullfreq.model import NullParams, as_sample

__all__ = ["RejectionSet", "bh_reject", "confusion", "pvalues_from_z"]


@dataclass(frozen=True)
class RejectionSet:
    """Outcome of a BH run: rejected indices and the p-value threshold used."""

    rejected: np.ndarray  # indices into the p-value vector, ascending
    threshold: float  # p*; 0.0 when nothing is rejected
    q: float

    @property
    def n_rejected(self) -> int:
        return self.rejected.size


def pvalues_from_z(data: "np.typing.ArrayLike", null: NullParams) -> np.ndarray:
    """One-sided upper-tail p-values p_j = Phi_bar((X_j - mu0) / sigma0)."""
    x = as_sample(data)
    return np.asarray(normal_survival((x - null.mu0) / null.sigma0))


def bh_reject(pvals: "np.typing.ArrayLike", q: float) -> RejectionSet:
    """Benjamini-Hochberg step-up rule at level q.

    Finds the largest k with p_(k) <= k q / n and rejects every hypothesis with
    p_j <= p_(k). Tied p-values at the boundary are rejected together since the
    rule is a threshold on values.
    """
    p = np.asarray(pvals, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise DomainError("pvals must be a non-empty 1-d vector")
    if np.any(p < 0) or np.any(p > 1):
        raise DomainError("p-values must lie in [0, 1]")
    if not 0 < q < 1:
        raise DomainError(f"q must be in (0, 1), got {q}")
    n = p.size
    order = np.argsort(p, kind="stable")
    sorted_p = p[order]
    ok = np.nonzero(sorted_p <= (np.arange(1, n + 1) * q / n))[0]
    if ok.size == 0:
        return RejectionSet(rejected=np.empty(0, dtype=int), threshold=0.0, q=q)
    threshold = float(sorted_p[ok[-1]])
    rejected = np.nonzero(p <= threshold)[0]
    return RejectionSet(rejected=rejected, threshold=threshold, q=q)


def confusion(rej: RejectionSet, truth: MixtureTruth) -> tuple[int, int]:
    """Count (true positives, false positives) of a rejection set against truth."""
    if rej.rejected.size and int(rej.rejected.max()) >= truth.n:
        raise DomainError("rejection indices exceed the truth vector length")
    if rej.rejected.size == 0:
        return 0, 0
    null_flags = truth.is_null[rej.rejected]
    fp = int(np.count_nonzero(null_flags))
    tp = int(null_flags.size - fp)
    return tp, fp
