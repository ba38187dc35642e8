"""Empirical characteristic function, its derivatives, and analytic Gaussian-mixture
characteristic functions.

All values are returned as Python complex numbers. The empirical sums use numpy's
pairwise reduction (``np.mean``), which keeps roundoff at the 1e-15 level even for
n up to 1e6; the downstream level-crossing search depends on stable tails.
"""

from __future__ import annotations

import numpy as np

from nullfreq.errors import DomainError
from nullfreq.model import MixtureComponents, NullParams, as_sample

__all__ = [
    "MixtureComponents",
    "ecf",
    "ecf_derivative",
    "ecf_modulus_grid",
    "gaussian_cf",
    "mixture_cf",
    "psi",
]


def ecf(data: "np.typing.ArrayLike", t: float) -> complex:
    """Empirical characteristic function (1/n) * sum_j exp(i t X_j)."""
    x = as_sample(data)
    if not np.isfinite(t):
        raise DomainError("t must be finite")
    # np.exp on a purely imaginary argument computes sin/cos simultaneously
    # per sample; no phase recurrence across evaluations.
    return complex(np.mean(np.exp(1j * t * x)))


def ecf_derivative(data: "np.typing.ArrayLike", t: float, order: int = 1) -> complex:
    """Derivative of the ECF: (1/n) * sum_j (i X_j)^order * exp(i t X_j)."""
    x = as_sample(data)
    if not np.isfinite(t):
        raise DomainError("t must be finite")
    if order not in (1, 2):
        raise DomainError(f"order must be 1 or 2, got {order}")
    return complex(np.mean((1j * x) ** order * np.exp(1j * t * x)))


# Cap on the size of the (samples x frequencies) scratch matrix, in elements;
# keeps peak memory of a batched evaluation near 300 MB.
_BATCH_ELEMENTS = 12_000_000


def cosine_mean_grid(
    x: np.ndarray,
    s: np.ndarray,
    *,
    with_sin: bool = False,
    dtype: type = np.float64,
) -> np.ndarray | tuple[np.ndarray, np.ndarray]:
    """Batched (1/n) sum_j cos(s_k X_j) (and optionally the sine mean) over a grid s.

    Evaluation is blocked over the frequency axis so the scratch matrix stays
    bounded regardless of n and len(s). With dtype float32 the per-point error
    is ~1e-6 absolute but throughput is an order of magnitude higher (SIMD trig);
    means are always accumulated in float64.
    """
    cos_out = np.empty(s.size)
    sin_out = np.empty(s.size) if with_sin else None
    x = x.astype(dtype, copy=False)
    s = s.astype(dtype, copy=False)
    step = max(1, _BATCH_ELEMENTS // max(1, x.size))
    for start in range(0, s.size, step):
        theta = np.multiply.outer(x, s[start : start + step])
        cos_out[start : start + step] = np.mean(np.cos(theta), axis=0, dtype=np.float64)
        if with_sin:
            np.sin(theta, out=theta)
            sin_out[start : start + step] = np.mean(theta, axis=0, dtype=np.float64)
    if with_sin:
        return cos_out, sin_out
    return cos_out


def ecf_modulus_grid(data: "np.typing.ArrayLike", ts: "np.typing.ArrayLike") -> np.ndarray:
    """|phi_n| evaluated on an array of frequencies in one fast vectorized pass.

    Equivalent to ``[abs(ecf(data, t)) for t in ts]`` up to ~1e-6 absolute
    error (single-precision trig); used by the frequency scan, where thousands
    of grid points are probed and the relevant signal scale is the sampling
    noise O(n^(-1/2)). Exact crossing refinement is done in double precision.
    """
    x = as_sample(data)
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    re, im = cosine_mean_grid(x, ts, with_sin=True, dtype=np.float32)
    return np.hypot(re, im)


def gaussian_cf(params: NullParams, t: float) -> complex:
    """Unit-mass Gaussian characteristic function exp(i mu0 t - sigma0^2 t^2 / 2)."""
    return complex(np.exp(1j * params.mu0 * t - params.sigma0_sq * t * t / 2.0))


def mixture_cf(components: MixtureComponents, t: float) -> complex:
    """Characteristic function of the finite mixture, (1/n) sum_j exp(i t mu_j - sigma_j^2 t^2/2).

    The non-stochastic counterpart of the ECF; used as oracle in tests and
    diagnostics.
    """
    n = components.n
    total = components.n_null * gaussian_cf(components.null, t)
    if components.nonnull:
        mus = np.array([m for m, _ in components.nonnull])
        sigmas = np.array([s for _, s in components.nonnull])
        total += complex(np.sum(np.exp(1j * t * mus - sigmas**2 * t * t / 2.0)))
    return total / n


def psi(components: MixtureComponents, t: float) -> complex:
    """Non-null distortion factor:

        eps_n * Ave_{non-null} exp(i (mu_j - mu0) t - (sigma_j^2 - sigma0^2) t^2 / 2).

    Returns 0 when there are no non-null components. Satisfies the factorization
    phi = phi0 + exp(i mu0 t - sigma0^2 t^2/2) * psi(t), with
    phi0 = (1 - eps_n) * gaussian_cf(null).
    """
    if not components.nonnull:
        return 0j
    mu0 = components.null.mu0
    s0sq = components.null.sigma0_sq
    mus = np.array([m for m, _ in components.nonnull])
    sigmas = np.array([s for _, s in components.nonnull])
    ave = np.mean(np.exp(1j * (mus - mu0) * t - (sigmas**2 - s0sq) * t * t / 2.0))
    return complex(components.epsilon_n * ave)
