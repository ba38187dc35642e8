"""Shared fixtures/helpers and the acceptance-criteria summary reporter."""

from __future__ import annotations

import re

import numpy as np
import pytest

from nullfreq.datagen import MixtureSpec, RngSeed, Uniform, generate
from nullfreq.model import NullParams

# The heteroscedastic benchmark design used throughout the simulation studies:
# null N(-1/2, 1/2), non-null locations N(0, 1), non-null scales U(a, a + 0.5).
BENCH_NULL = NullParams(mu0=-0.5, sigma0_sq=0.5)


def bench_spec(n: int, epsilon: float = 0.1, a: float = 1.0) -> MixtureSpec:
    return MixtureSpec(
        n=n, epsilon=epsilon, null=BENCH_NULL, nonnull_sigma=Uniform(a, a + 0.5)
    )


def bench_sample(n: int, replicate: int = 0, *, seed: int = 20080213, **kw):
    return generate(bench_spec(n, **kw), RngSeed(seed, replicate))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


# ---------------------------------------------------------------------------
# acceptance-criteria reporting: one line per criterion at the end of the run

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")
_acceptance_outcomes: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = _CRITERION.search(item.name)
    if not m:
        return
    num, label = int(m.group(1)), m.group(2).replace("_", " ")
    if report.when == "call" or (report.when == "setup" and report.skipped):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIPPED"}[
            report.outcome
        ]
        # keep the worst outcome if both setup and call reported
        if num not in _acceptance_outcomes or status != "PASS":
            _acceptance_outcomes[num] = (status, label)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_acceptance_outcomes):
        status, label = _acceptance_outcomes[num]
        terminalreporter.write_line(f"criterion {num:2d} ({label}): {status}")
