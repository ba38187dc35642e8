"""Orchestration of the four simulation studies and metric aggregation.

Every design is fully deterministic given (config, base seed): replicate r of
design cell c draws from a stream derived with a spawn key unique to (c, r),
so permuting execution order (or running replicates in parallel) cannot change
the results. Aggregation is an ordered reduction by replicate index.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from nullfreq.datagen import (
    Fixed,
    MixtureSpec,
    RngSeed,
    Uniform,
    generate,
    generate_dependent,
)
from nullfreq.errors import ConfigError, EstimationError
from nullfreq.model import NullParams
from nullfreq.mtp import bh_reject, confusion, pvalues_from_z
from nullfreq.null_estimation import (
    DEFAULT_GAMMA,
    EstimationFailure,
    estimate_null,
    estimate_null_sweep,
)

__all__ = [
    "DESIGNS",
    "ExperimentConfig",
    "MetricTable",
    "run_consistency_table",
    "run_dependence_sweep",
    "run_design",
    "run_fdr_misspec",
    "run_gamma_sweep",
]

DESIGNS = ("gamma_sweep", "consistency_table", "dependence_sweep", "fdr_misspec")


@dataclass(frozen=True)
class ExperimentConfig:
    """Configuration of one simulation study.

    Only the fields relevant to `design` are consulted; the defaults reproduce
    the published designs at desk scale.
    """

    design: str
    replicates: int = 100
    base_seed: int = 20080213
    gamma: float = DEFAULT_GAMMA
    # mixture layout shared by the estimation designs
    n: int = 10_000
    epsilon: float = 0.1
    mu0: float = -0.5
    sigma0: float = 1.0 / np.sqrt(2.0)
    a: float = 1.0
    # gamma_sweep
    gamma_grid: tuple[float, ...] = tuple(np.round(np.arange(0.01, 0.50, 0.01), 2))
    a_grid: tuple[float, ...] = (0.75, 1.00, 1.25, 1.50)
    # consistency_table
    n_grid: tuple[int, ...] = (10_000, 40_000, 160_000)
    # dependence_sweep
    L_grid: tuple[int, ...] = tuple(range(0, 251, 5))
    # fdr_misspec
    q: float = 0.05
    fdr_n_null: int = 9000
    fdr_n_nonnull: int = 1000
    fdr_true_sigma: float = 0.95
    fdr_nonnull_mu: float = 2.0
    threads: int = 1

    def __post_init__(self) -> None:
        if self.design not in DESIGNS:
            raise ConfigError(f"design: unknown design {self.design!r}; choose from {DESIGNS}")
        if self.replicates < 1:
            raise ConfigError("replicates: must be >= 1")
        if not 0 < self.gamma < 0.5:
            raise ConfigError("gamma: must be in (0, 1/2)")
        if any(not 0 < g < 0.5 for g in self.gamma_grid):
            raise ConfigError("gamma_grid: every value must be in (0, 1/2)")
        if not 0 < self.q < 1:
            raise ConfigError("q: must be in (0, 1)")

    def null(self) -> NullParams:
        return NullParams(mu0=self.mu0, sigma0_sq=self.sigma0**2)

    def mixture_spec(self, n: int | None = None, a: float | None = None) -> MixtureSpec:
        a = self.a if a is None else a
        return MixtureSpec(
            n=self.n if n is None else n,
            epsilon=self.epsilon,
            null=self.null(),
            nonnull_sigma=Uniform(a, a + 0.5),
        )


@dataclass
class MetricTable:
    """Aggregated metrics, one row per design cell, serializable to CSV/JSON."""

    design: str
    columns: list[str]
    rows: list[dict[str, Any]]
    replicates: int
    base_seed: int

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=self.columns)
            writer.writeheader()
            for row in self.rows:
                writer.writerow({k: _fmt(row.get(k)) for k in self.columns})

    def to_json(self, path: str | Path | None = None) -> str:
        payload = {
            "design": self.design,
            "replicates": self.replicates,
            "base_seed": self.base_seed,
            "rows": self.rows,
        }
        text = json.dumps(payload, indent=2, sort_keys=True, default=_fmt) + "\n"
        if path is not None:
            Path(path).write_text(text)
        return text


def _fmt(v: Any) -> Any:
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def _replicate_map(
    fn: Callable[[int], Any], replicates: int, threads: int
) -> list[Any]:
    """Run fn(r) for r = 0..replicates-1, optionally on a thread pool.

    Results are returned ordered by replicate index regardless of scheduling.
    """
    if threads <= 1:
        return [fn(r) for r in range(replicates)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(replicates)))


def _summarize_errors(
    sigma_hats: Sequence[float], mu_hats: Sequence[float], truth: NullParams
) -> dict[str, float]:
    """MSE / RMSE of the null estimates, on both the sigma0 and sigma0^2 scales."""
    s = np.asarray(sigma_hats, dtype=float)
    m = np.asarray(mu_hats, dtype=float)
    mse_sigma = float(np.mean((np.sqrt(s) - truth.sigma0) ** 2))
    mse_sigma_sq = float(np.mean((s - truth.sigma0_sq) ** 2))
    mse_mu = float(np.mean((m - truth.mu0) ** 2))
    return {
        "mse_sigma0": mse_sigma,
        "rmse_sigma0": float(np.sqrt(mse_sigma)),
        "mse_sigma0_sq": mse_sigma_sq,
        "rmse_sigma0_sq": float(np.sqrt(mse_sigma_sq)),
        "mse_mu0": mse_mu,
        "rmse_mu0": float(np.sqrt(mse_mu)),
    }


def run_gamma_sweep(cfg: ExperimentConfig) -> MetricTable:
    """MSE of both null estimators per (a, gamma) cell across replicates."""
    truth = cfg.null()
    rows: list[dict[str, Any]] = []
    for a_idx, a in enumerate(cfg.a_grid):
        spec = cfg.mixture_spec(a=a)

        def one_rep(r: int, a_idx: int = a_idx, spec: MixtureSpec = spec) -> list:
            x, _ = generate(spec, RngSeed(cfg.base_seed, a_idx * cfg.replicates + r))
            return estimate_null_sweep(x, cfg.gamma_grid)

        per_rep = _replicate_map(one_rep, cfg.replicates, cfg.threads)
        for g_idx, gamma in enumerate(cfg.gamma_grid):
            sigma_hats, mu_hats, failures = [], [], 0
            for rep_results in per_rep:
                res = rep_results[g_idx]
                if isinstance(res, EstimationFailure):
                    failures += 1
                else:
                    params, _ = res
                    sigma_hats.append(params.sigma0_sq)
                    mu_hats.append(params.mu0)
            row: dict[str, Any] = {"a": a, "gamma": gamma, "failures": failures,
                                   "used_replicates": len(sigma_hats)}
            if sigma_hats:
                row.update(_summarize_errors(sigma_hats, mu_hats, truth))
            rows.append(row)
    columns = ["a", "gamma", "failures", "used_replicates",
               "mse_sigma0", "rmse_sigma0", "mse_sigma0_sq", "rmse_sigma0_sq",
               "mse_mu0", "rmse_mu0"]
    return MetricTable("gamma_sweep", columns, rows, cfg.replicates, cfg.base_seed)


def run_consistency_table(cfg: ExperimentConfig) -> MetricTable:
    """MSE of the null estimators per sample size n (the large-n consistency table)."""
    truth = cfg.null()
    rows: list[dict[str, Any]] = []
    for n_idx, n in enumerate(cfg.n_grid):
        spec = cfg.mixture_spec(n=n)

        def one_rep(r: int, n_idx: int = n_idx, spec: MixtureSpec = spec):
            x, _ = generate(spec, RngSeed(cfg.base_seed, n_idx * cfg.replicates + r))
            try:
                params, _ = estimate_null(x, cfg.gamma)
                return params
            except EstimationError:
                return None

        results = _replicate_map(one_rep, cfg.replicates, cfg.threads)
        good = [p for p in results if p is not None]
        row: dict[str, Any] = {"n": n, "failures": len(results) - len(good),
                               "used_replicates": len(good)}
        if good:
            row.update(_summarize_errors([p.sigma0_sq for p in good],
                                         [p.mu0 for p in good], truth))
        rows.append(row)
    columns = ["n", "failures", "used_replicates",
               "mse_sigma0", "rmse_sigma0", "mse_sigma0_sq", "rmse_sigma0_sq",
               "mse_mu0", "rmse_mu0"]
    return MetricTable("consistency_table", columns, rows, cfg.replicates, cfg.base_seed)


def run_dependence_sweep(cfg: ExperimentConfig) -> MetricTable:
    """RMSE of the null estimators per dependence range L (block moving average)."""
    truth = cfg.null()
    spec = cfg.mixture_spec()
    rows: list[dict[str, Any]] = []
    for l_idx, L in enumerate(cfg.L_grid):

        def one_rep(r: int, l_idx: int = l_idx, L: int = L):
            x, _ = generate_dependent(spec, L, RngSeed(cfg.base_seed, l_idx * cfg.replicates + r))
            try:
                params, _ = estimate_null(x, cfg.gamma)
                return params
            except EstimationError:
                return None

        results = _replicate_map(one_rep, cfg.replicates, cfg.threads)
        good = [p for p in results if p is not None]
        row: dict[str, Any] = {"L": L, "failures": len(results) - len(good),
                               "used_replicates": len(good)}
        if good:
            row.update(_summarize_errors([p.sigma0_sq for p in good],
                                         [p.mu0 for p in good], truth))
        rows.append(row)
    columns = ["L", "failures", "used_replicates",
               "mse_sigma0", "rmse_sigma0", "mse_sigma0_sq", "rmse_sigma0_sq",
               "mse_mu0", "rmse_mu0"]
    return MetricTable("dependence_sweep", columns, rows, cfg.replicates, cfg.base_seed)


def run_fdr_misspec(cfg: ExperimentConfig) -> MetricTable:
    """Paired per-cycle true-positive counts under the true and misspecified nulls.

    Each cycle draws the null effects from N(0, s^2) and the non-null effects
    from N(mu, s^2) with s = fdr_true_sigma, then applies BH at level q to the
    one-sided p-values computed under the true null N(0, s^2) and under the
    misspecified null N(0, 1). Rows are per-cycle pairs sorted ascending by the
    true-null count (plot-ready), followed by one summary row.
    """
    n = cfg.fdr_n_null + cfg.fdr_n_nonnull
    s = cfg.fdr_true_sigma
    spec = MixtureSpec(
        n=n,
        epsilon=cfg.fdr_n_nonnull / n,
        null=NullParams(mu0=0.0, sigma0_sq=s * s),
        nonnull_mu=Fixed(cfg.fdr_nonnull_mu),
        nonnull_sigma=Fixed(s),
    )
    true_null = NullParams(mu0=0.0, sigma0_sq=s * s)
    misspec_null = NullParams(mu0=0.0, sigma0_sq=1.0)

    def one_cycle(r: int) -> tuple[int, int, int, int]:
        x, truth = generate(spec, RngSeed(cfg.base_seed, r))
        tp_t, fp_t = confusion(bh_reject(pvalues_from_z(x, true_null), cfg.q), truth)
        tp_m, fp_m = confusion(bh_reject(pvalues_from_z(x, misspec_null), cfg.q), truth)
        return tp_t, fp_t, tp_m, fp_m

    cycles = _replicate_map(one_cycle, cfg.replicates, cfg.threads)
    order = np.argsort([c[0] for c in cycles], kind="stable")
    rows: list[dict[str, Any]] = [
        {"cycle": int(i), "tp_true_null": cycles[i][0], "fp_true_null": cycles[i][1],
         "tp_misspec_null": cycles[i][2], "fp_misspec_null": cycles[i][3]}
        for i in order
    ]
    rows.append({
        "cycle": "mean",
        "tp_true_null": float(np.mean([c[0] for c in cycles])),
        "fp_true_null": float(np.mean([c[1] for c in cycles])),
        "tp_misspec_null": float(np.mean([c[2] for c in cycles])),
        "fp_misspec_null": float(np.mean([c[3] for c in cycles])),
    })
    columns = ["cycle", "tp_true_null", "fp_true_null", "tp_misspec_null", "fp_misspec_null"]
    return MetricTable("fdr_misspec", columns, rows, cfg.replicates, cfg.base_seed)


_RUNNERS = {
    "gamma_sweep": run_gamma_sweep,
    "consistency_table": run_consistency_table,
    "dependence_sweep": run_dependence_sweep,
    "fdr_misspec": run_fdr_misspec,
}


def run_design(cfg: ExperimentConfig) -> MetricTable:
    """Dispatch a config to its design runner."""
    return _RUNNERS[cfg.design](cfg)
