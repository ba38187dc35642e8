"""Null-parameter estimation: the sigma0^2 / mu0 functionals, the adaptive
frequency selection t_hat_n(gamma), and the resulting estimators.

The estimators evaluate two ratio functionals of a characteristic function at
the smallest frequency where |phi_n| has decayed to n^(-gamma). Evaluated on an
exact Gaussian CF the functionals recover the parameters exactly at every t != 0,
so all estimation error comes from the non-null distortion and sampling noise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from nullfreq.charfn import ecf, ecf_derivative, ecf_modulus_grid, mixture_cf
from nullfreq.errors import DegenerateEstimateError, DomainError, FrequencyNotFoundError
from nullfreq.model import MixtureComponents, NullParams, as_sample

__all__ = [
    "DEFAULT_GAMMA",
    "EstimationFailure",
    "FrequencyChoice",
    "NullParams",
    "estimate_null",
    "estimate_null_sweep",
    "mu0_functional",
    "oracle_frequency",
    "select_frequency",
    "sigma0_functional",
]

#: Default frequency-selection exponent; the best range is roughly (0.1, 0.15).
DEFAULT_GAMMA = 0.1

# Crossing-scan resolution: grid step log(n)/1e4, then bisection to this t-error.
_GRID_POINTS = 10_000
_BISECT_TOL = 1e-10
_SCAN_CHUNK = 512


@dataclass(frozen=True)
class FrequencyChoice:
    """Record of one adaptive frequency selection t_hat_n(gamma)."""

    gamma: float
    t_hat: float
    threshold: float  # n^(-gamma)
    cf_modulus_at_t_hat: float


def sigma0_functional(f_val: complex, f_deriv: complex, t: float) -> float:
    """Variance functional sigma0^2(f; t) = -(d/dt |f|) / (t * |f|).

    With d/dt|f| = (Re f * Re f' + Im f * Im f') / |f| this is
    -(Re f * Re f' + Im f * Im f') / (t * |f|^2). Exact on an analytic Gaussian
    CF for every t != 0; invariant under positive rescaling of (f, f').
    """
    mod_sq = f_val.real**2 + f_val.imag**2
    if t == 0 or mod_sq == 0:
        raise DomainError("functional undefined: need t != 0 and |f| > 0")
    return -(f_val.real * f_deriv.real + f_val.imag * f_deriv.imag) / (t * mod_sq)


def mu0_functional(f_val: complex, f_deriv: complex) -> float:
    """Location functional mu0(f) = [Re f * Im f' - Re f' * Im f] / |f|^2."""
    mod_sq = f_val.real**2 + f_val.imag**2
    if mod_sq == 0:
        raise DomainError("functional undefined: |f| = 0")
    return (f_val.real * f_deriv.imag - f_deriv.real * f_val.imag) / mod_sq


def _first_crossing(
    modulus_on_grid: Callable[[np.ndarray], np.ndarray],
    modulus_at: Callable[[float], float],
    threshold: float,
    t_max: float,
) -> tuple[float, float]:
    """Locate the first downcrossing of `modulus` with `threshold` on [0, t_max].

    Scans a uniform grid (step t_max / _GRID_POINTS) in chunks until the first
    grid point at or below the level, then bisects the bracketing interval. The
    literal first downcrossing is taken even if caused by sample noise, matching
    the infimum definition. Returns (t_star, modulus(t_star)).
    """
    dt = t_max / _GRID_POINTS
    prev_t = 0.0
    bracket = None
    for start in range(1, _GRID_POINTS + 1, _SCAN_CHUNK):
        ks = np.arange(start, min(start + _SCAN_CHUNK, _GRID_POINTS + 1))
        ts = ks * dt
        mods = modulus_on_grid(ts)
        below = np.nonzero(mods <= threshold)[0]
        if below.size:
            i = below[0]
            lo = prev_t if i == 0 else float(ts[i - 1])
            bracket = (lo, float(ts[i]))
            break
        prev_t = float(ts[-1])
    if bracket is None:
        raise FrequencyNotFoundError(
            f"|cf| never reached {threshold:.4g} on [0, {t_max:.4g}]; "
            "the data may be too concentrated for this gamma (try a larger gamma)"
        )
    lo, hi = bracket
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if modulus_at(mid) > threshold:
            lo = mid
        else:
            hi = mid
    t_star = 0.5 * (lo + hi)
    return t_star, modulus_at(t_star)


def select_frequency(data: "np.typing.ArrayLike", gamma: float = DEFAULT_GAMMA) -> FrequencyChoice:
    """Adaptive frequency t_hat_n(gamma) = inf{t : |phi_n(t)| = n^(-gamma), 0 <= t <= log n}."""
    x = as_sample(data)
    n = x.size
    if n < 2:
        raise DomainError(f"need n >= 2 samples, got {n}")
    if not 0 < gamma < 0.5:
        raise DomainError(f"gamma must be in (0, 1/2), got {gamma}")
    threshold = float(n**-gamma)
    t_max = float(np.log(n))
    t_hat, mod = _first_crossing(
        lambda ts: ecf_modulus_grid(x, ts),
        lambda t: abs(ecf(x, t)),
        threshold,
        t_max,
    )
    return FrequencyChoice(gamma=gamma, t_hat=t_hat, threshold=threshold, cf_modulus_at_t_hat=mod)


def oracle_frequency(components: MixtureComponents, gamma: float, n: int) -> float:
    """Non-stochastic frequency t_n(gamma) = inf{t : |phi(t)| = n^(-gamma), 0 <= t <= log n}.

    Same search as `select_frequency` but on the analytic mixture CF; `n` sets
    the threshold and scan range (it need not equal the mixture's own count).
    """
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if not 0 < gamma < 0.5:
        raise DomainError(f"gamma must be in (0, 1/2), got {gamma}")
    threshold = float(n**-gamma)
    t_max = float(np.log(n))

    def mod_grid(ts: np.ndarray) -> np.ndarray:
        return np.array([abs(mixture_cf(components, float(t))) for t in ts])

    t_star, _ = _first_crossing(
        mod_grid, lambda t: abs(mixture_cf(components, t)), threshold, t_max
    )
    return t_star


def estimate_null_sweep(
    data: "np.typing.ArrayLike", gammas: "np.typing.ArrayLike"
) -> list[tuple[NullParams, FrequencyChoice] | EstimationFailure]:
    """Run `estimate_null` for many gamma values over shared immutable data.

    The grid scan of |phi_n| over [0, log n] is computed once and reused for
    every gamma; only the bracket bisection and the functional evaluation are
    per-gamma. Failures (no crossing, degenerate variance) are returned in
    place rather than raised, so one bad gamma does not abort a sweep.
    """
    x = as_sample(data)
    n = x.size
    if n < 2:
        raise DomainError(f"need n >= 2 samples, got {n}")
    gammas = np.atleast_1d(np.asarray(gammas, dtype=float))
    if np.any(gammas <= 0) or np.any(gammas >= 0.5):
        raise DomainError("every gamma must be in (0, 1/2)")
    t_max = float(np.log(n))
    dt = t_max / _GRID_POINTS
    ts = np.arange(1, _GRID_POINTS + 1) * dt
    mods = ecf_modulus_grid(x, ts)

    results: list[tuple[NullParams, FrequencyChoice] | EstimationFailure] = []
    for gamma in gammas:
        threshold = float(n**-gamma)
        below = np.nonzero(mods <= threshold)[0]
        if below.size == 0:
            results.append(EstimationFailure(float(gamma), "frequency-not-found"))
            continue
        i = below[0]
        lo = 0.0 if i == 0 else float(ts[i - 1])
        hi = float(ts[i])
        while hi - lo > _BISECT_TOL:
            mid = 0.5 * (lo + hi)
            if abs(ecf(x, mid)) > threshold:
                lo = mid
            else:
                hi = mid
        t_hat = 0.5 * (lo + hi)
        freq = FrequencyChoice(
            gamma=float(gamma),
            t_hat=t_hat,
            threshold=threshold,
            cf_modulus_at_t_hat=abs(ecf(x, t_hat)),
        )
        f_val = ecf(x, t_hat)
        f_deriv = ecf_derivative(x, t_hat, order=1)
        sigma0_sq = sigma0_functional(f_val, f_deriv, t_hat)
        if sigma0_sq <= 0:
            results.append(EstimationFailure(float(gamma), "degenerate-estimate"))
            continue
        mu0 = mu0_functional(f_val, f_deriv)
        results.append((NullParams(mu0=mu0, sigma0_sq=sigma0_sq), freq))
    return results


@dataclass(frozen=True)
class EstimationFailure:
    """A per-gamma failure inside `estimate_null_sweep`."""

    gamma: float
    reason: str  # "frequency-not-found" or "degenerate-estimate"


def estimate_null(
    data: "np.typing.ArrayLike", gamma: float = DEFAULT_GAMMA
) -> tuple[NullParams, FrequencyChoice]:
    """Estimate (mu0, sigma0^2) by evaluating both functionals at t_hat_n(gamma).

    Raises FrequencyNotFoundError if |phi_n| never decays to the level, and
    DegenerateEstimateError if the variance estimate is non-positive; a
    non-positive estimate is reported rather than clamped because clamping
    would silently corrupt downstream proportion estimates.
    """
    x = as_sample(data)
    freq = select_frequency(x, gamma)
    f_val = ecf(x, freq.t_hat)
    f_deriv = ecf_derivative(x, freq.t_hat, order=1)
    sigma0_sq = sigma0_functional(f_val, f_deriv, freq.t_hat)
    mu0 = mu0_functional(f_val, f_deriv)
    if sigma0_sq <= 0:
        raise DegenerateEstimateError(
            f"variance estimate {sigma0_sq:.4g} <= 0 at t_hat={freq.t_hat:.4g}"
        )
    return NullParams(mu0=mu0, sigma0_sq=sigma0_sq), freq
