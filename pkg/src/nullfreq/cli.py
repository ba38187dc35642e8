"""Command-line surface: ingest z-score files, run estimators and experiments,
emit reports.

Exit codes: 0 success, 2 input/parse error, 3 estimation failure, 4 config error.
Every command is deterministic given (inputs, flags, seed); the seed is taken
from --seed, else the NULLFREQ_SEED environment variable, else a fixed default.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
import time
from pathlib import Path
from typing import Any

import numpy as np

from nullfreq.errors import ConfigError, DomainError, EstimationError, NullfreqError
from nullfreq.experiments import DESIGNS, ExperimentConfig, run_design
from nullfreq.model import NullParams
from nullfreq.mtp import bh_reject
from nullfreq.null_estimation import DEFAULT_GAMMA, estimate_null
from nullfreq.proportion import estimate_proportion, estimate_proportion_plugin

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ESTIMATION = 3
EXIT_CONFIG = 4

DEFAULT_SEED = 20080213  # fixed, never time-based: reproducibility first


@dataclasses.dataclass
class RunReport:
    command: str
    config: dict[str, Any]
    input_digest: str | None
    outputs: dict[str, Any]
    warnings: list[str]
    wall_time_s: float

    def emit(self, as_json: bool) -> None:
        if as_json:
            print(json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True))
            return
        print(f"command: {self.command}")
        for key, value in self.config.items():
            print(f"  {key}: {value}")
        if self.input_digest:
            print(f"input sha256: {self.input_digest}")
        for key, value in self.outputs.items():
            print(f"{key}: {value}")
        for warning in self.warnings:
            print(f"warning: {warning}")
        print(f"wall time: {self.wall_time_s:.3f}s")


def _read_values(path: str) -> tuple[np.ndarray, str]:
    """Read one real per line (# comments allowed, single-column CSV header auto-detected).

    Returns (values, sha256 digest of the file content).
    """
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"{path}: no such file")
    raw = p.read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    values: list[float] = []
    for lineno, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
        text = line.split("#", 1)[0].strip().rstrip(",")
        if not text:
            continue
        try:
            values.append(float(text))
        except ValueError:
            if lineno == 1 and not values:
                continue  # single-column CSV header
            raise ValueError(f"{path}:{lineno}: cannot parse {text!r} as a number")
    if not values:
        raise ValueError(f"{path}: no numeric values found")
    return np.array(values), digest


# ---------------------------------------------------------------------------
# config files: flat `key = value` lines with dotted sections, # comments

_CONFIG_KEYS: dict[str, tuple[str, Any]] = {
    "design": ("design", str),
    "replicates": ("replicates", int),
    "seed": ("base_seed", int),
    "gamma": ("gamma", float),
    "threads": ("threads", int),
    "mixture.n": ("n", int),
    "mixture.epsilon": ("epsilon", float),
    "mixture.mu0": ("mu0", float),
    "mixture.sigma0": ("sigma0", float),
    "mixture.a": ("a", float),
    "sweep.gamma_grid": ("gamma_grid", lambda s: tuple(float(v) for v in s.split(","))),
    "sweep.a_grid": ("a_grid", lambda s: tuple(float(v) for v in s.split(","))),
    "sweep.n_grid": ("n_grid", lambda s: tuple(int(v) for v in s.split(","))),
    "sweep.L_grid": ("L_grid", lambda s: tuple(int(v) for v in s.split(","))),
    "fdr.q": ("q", float),
    "fdr.n_null": ("fdr_n_null", int),
    "fdr.n_nonnull": ("fdr_n_nonnull", int),
    "fdr.true_sigma": ("fdr_true_sigma", float),
    "fdr.nonnull_mu": ("fdr_nonnull_mu", float),
}


def load_config(path: str) -> dict[str, Any]:
    """Parse a key-value config file into ExperimentConfig keyword arguments."""
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"{path}: no such file")
    kwargs: dict[str, Any] = {}
    for lineno, line in enumerate(p.read_text().splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {text!r}")
        key, _, value = text.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        field, parse = _CONFIG_KEYS[key]
        try:
            kwargs[field] = parse(value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {key}: {exc}") from exc
    return kwargs


def _resolve_seed(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("NULLFREQ_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"NULLFREQ_SEED: not an integer: {env!r}")
    return DEFAULT_SEED


# ---------------------------------------------------------------------------
# subcommands


def cmd_estimate_null(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    data, digest = _read_values(args.path)
    if data.size < 2:
        print(f"error: need n >= 2 values, got {data.size}", file=sys.stderr)
        return EXIT_INPUT
    params, freq = estimate_null(data, args.gamma)
    report = RunReport(
        command="estimate-null",
        config={"path": args.path, "gamma": args.gamma, "n": int(data.size)},
        input_digest=digest,
        outputs={
            "mu0_hat": params.mu0,
            "sigma0_hat": params.sigma0,
            "sigma0_sq_hat": params.sigma0_sq,
            "t_hat": freq.t_hat,
            "gamma": freq.gamma,
            "threshold": freq.threshold,
        },
        warnings=[],
        wall_time_s=time.perf_counter() - start,
    )
    report.emit(args.json)
    return EXIT_OK


def cmd_estimate_proportion(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    data, digest = _read_values(args.path)
    if data.size < 2:
        print(f"error: need n >= 2 values, got {data.size}", file=sys.stderr)
        return EXIT_INPUT
    if (args.mu0 is None) != (args.sigma0 is None):
        raise ConfigError("--mu0 and --sigma0 must be given together")
    if args.mu0 is not None:
        null = NullParams(mu0=args.mu0, sigma0_sq=args.sigma0**2)
        est = estimate_proportion(data, null, args.gamma_prop)
    else:
        est = estimate_proportion_plugin(data, args.gamma_null, args.gamma_prop)
    warnings = []
    if est.exceeds_one:
        warnings.append(f"estimate {est.epsilon_hat:.4g} exceeds 1; reported raw")
    report = RunReport(
        command="estimate-proportion",
        config={
            "path": args.path,
            "gamma_null": args.gamma_null,
            "gamma_prop": args.gamma_prop,
            "null_source": est.null_source,
            "n": int(data.size),
        },
        input_digest=digest,
        outputs={
            "epsilon_hat": est.epsilon_hat,
            "argmax_t": est.argmax_t,
            "t_max": est.t_max,
            "mu0_used": est.null_used.mu0,
            "sigma0_used": est.null_used.sigma0,
        },
        warnings=warnings,
        wall_time_s=time.perf_counter() - start,
    )
    report.emit(args.json)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    kwargs = load_config(args.config) if args.config else {}
    if args.design:
        kwargs["design"] = args.design
    if args.seed is not None or "base_seed" not in kwargs:
        kwargs["base_seed"] = _resolve_seed(args.seed)
    if args.threads is not None:
        kwargs["threads"] = args.threads
    if "design" not in kwargs:
        raise ConfigError(f"design: required (one of {DESIGNS})")
    cfg = ExperimentConfig(**kwargs)
    table = run_design(cfg)

    outputs: dict[str, Any] = {"design": cfg.design, "rows": len(table.rows)}
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = out_dir / f"{cfg.design}.csv"
        json_path = out_dir / f"{cfg.design}.json"
        table.to_csv(csv_path)
        table.to_json(json_path)
        outputs["csv"] = str(csv_path)
        outputs["json"] = str(json_path)
    report = RunReport(
        command="simulate",
        config={k: repr(v) for k, v in sorted(dataclasses.asdict(cfg).items())},
        input_digest=None,
        outputs=outputs,
        warnings=[],
        wall_time_s=time.perf_counter() - start,
    )
    report.emit(args.json)
    if not args.out and not args.json:
        print(table.to_json())
    return EXIT_OK


def cmd_bh(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    pvals, digest = _read_values(args.path)
    if np.any(pvals < 0) or np.any(pvals > 1):
        print(f"error: {args.path}: p-values must lie in [0, 1]", file=sys.stderr)
        return EXIT_INPUT
    rej = bh_reject(pvals, args.q)
    report = RunReport(
        command="bh",
        config={"path": args.path, "q": args.q, "n": int(pvals.size)},
        input_digest=digest,
        outputs={
            "n_rejected": rej.n_rejected,
            "threshold": rej.threshold,
            "rejected_indices": rej.rejected.tolist(),
        },
        warnings=[],
        wall_time_s=time.perf_counter() - start,
    )
    report.emit(args.json)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nullfreq",
        description="Estimate a Gaussian null distribution and the proportion of "
        "non-null effects from z-scores, via the empirical characteristic function.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("estimate-null", help="estimate (mu0, sigma0) from a z-score file")
    p.add_argument("path")
    p.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_estimate_null)

    p = sub.add_parser("estimate-proportion",
                       help="estimate the proportion of non-null effects")
    p.add_argument("path")
    p.add_argument("--gamma-null", type=float, default=DEFAULT_GAMMA,
                   help="gamma for the null-estimation stage (plug-in mode)")
    p.add_argument("--gamma-prop", type=float, default=DEFAULT_GAMMA,
                   help="gamma for the proportion stage")
    p.add_argument("--mu0", type=float, default=None,
                   help="known null mean (requires --sigma0; disables plug-in)")
    p.add_argument("--sigma0", type=float, default=None,
                   help="known null standard deviation (requires --mu0)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_estimate_proportion)

    p = sub.add_parser("simulate", help="run a simulation design from a config file")
    p.add_argument("--config", default=None, help="key-value config file")
    p.add_argument("--design", default=None, choices=DESIGNS,
                   help="design name (overrides the config file)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="directory for CSV/JSON artifacts")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("bh", help="Benjamini-Hochberg step-up on a p-value file")
    p.add_argument("path")
    p.add_argument("--q", type=float, default=0.05)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_bh)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (FileNotFoundError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        if isinstance(exc, DomainError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EstimationError as exc:
        print(f"estimation failed: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    except NullfreqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
