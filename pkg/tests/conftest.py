"""Shared fixtures: the acceptance-line reporter and the Monte-Carlo Ne sweep.

The sweep is session-scoped because it is by far the most expensive piece of
the suite (5 budgets x 200 seeds) and two tests consume it: the scaling
property test in test_spectral.py and the acceptance check in
test_acceptance.py.
"""

import math
import time

import numpy as np
import pytest

from entmap.qcore import PSI1, HamiltonianParams
from entmap.recon import estimate_combination, simulate_series
from entmap.spectral import plan_observation

_ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance summary")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_line():
    """Record one pass/fail line for the end-of-run acceptance summary."""

    def record(label: str, passed: bool, detail: str = "") -> None:
        status = "PASS" if passed else "FAIL"
        line = f"{label}: {status}" + (f" ({detail})" if detail else "")
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


@pytest.fixture(scope="session")
def fig_hamiltonian():
    return HamiltonianParams(1.2, 0.6, 1.4)


NE_SWEEP_VALUES = (4, 16, 64, 256, 1024)
NE_SWEEP_SEEDS = 200
NE_SWEEP_NT = 400


@pytest.fixture(scope="session")
def ne_sweep(fig_hamiltonian):
    """Frequency-error statistics versus endpoint shot budget.

    For each budget, 200 independent runs estimate the slowest combination
    (0.6) of the reference coupling from a 400-point endpoint-strategy trace.
    The planning guess is deliberately conservative (3.5x the true value, so
    the endpoints never sit near an oscillation node) and jittered per seed
    by +/-5% to keep grid/line alignment from being identical across runs.
    """
    w_true = 0.6
    stds = []
    medians = []
    preds = []
    t0 = time.perf_counter()
    for ne in NE_SWEEP_VALUES:
        errors = np.empty(NE_SWEEP_SEEDS)
        for seed in range(NE_SWEEP_SEEDS):
            jit = np.random.default_rng((seed, ne, 17)).uniform(-0.05, 0.05)
            guess = 3.5 * w_true * (1.0 + jit)
            plan = plan_observation(guess, NE_SWEEP_NT, ne, "endpoint")
            series = simulate_series(fig_hamiltonian, PSI1, plan, seed + 9000 * ne)
            value, _, _, _ = estimate_combination(series, plan)
            errors[seed] = value - w_true
        stds.append(float(errors.std()))
        medians.append(float(np.median(np.abs(errors)) / w_true))
        preds.append(4.0 / (NE_SWEEP_NT * math.sqrt(ne)))
    elapsed = time.perf_counter() - t0
    slope = float(np.polyfit(np.log(NE_SWEEP_VALUES), np.log(stds), 1)[0])
    return {
        "ne_values": NE_SWEEP_VALUES,
        "stds": tuple(stds),
        "medians": tuple(medians),
        "preds": tuple(preds),
        "slope": slope,
        "elapsed": elapsed,
    }
