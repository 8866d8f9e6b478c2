"""Coupling reconstruction from measured oscillation frequencies, and the full pipeline.

The four protocol inputs yield the magnitudes of four linear combinations of the
couplings: |c1 - c2|, |c1 + c2|, |c2 - c3|, |c2 + c3|.  Magnitudes lose signs, and
H and -H generate identical concurrence traces, so reconstruction enumerates sign
assignments and resolves the leftover global ambiguity with a fixed convention.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .concest import CHANNEL_FOR_INPUT, ConcurrenceSeries, build_series
from .measure import BASIS_BY_TAG, PrepSpec, outcome_probs, point_rng, prepare_input, sample_counts
from .qcore import INPUT_IDS, HamiltonianParams, evolve
from .spectral import (
    FrequencyEstimate,
    NoOscillationError,
    SamplingPlan,
    dft,
    find_peak,
    plan_observation,
    refine_frequency,
)

# Rows map (c1, c2, c3) to the signed combinations (c1-c2, c1+c2, c2-c3, c2+c3).
COMBINATION_MATRIX = np.array(
    [
        [1.0, -1.0, 0.0],
        [1.0, 1.0, 0.0],
        [0.0, 1.0, -1.0],
        [0.0, 1.0, 1.0],
    ]
)

SIGN_CONVENTION = "c2 >= 0"

MODES = ("sampled", "noiseless")


class InconsistentFrequencyError(RuntimeError):
    """No sign assignment reproduces the measured frequency quad within tolerance."""


@dataclass(frozen=True)
class FrequencyQuad:
    """Measured magnitudes (w1, w2, w3, w4) of the four coupling combinations.

    sigmas are absolute one-sigma uncertainties; a degenerate (zero) combination
    carries a one-bin uncertainty rather than a fractional one.
    """

    values: tuple[float, float, float, float]
    sigmas: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        if len(self.values) != 4 or len(self.sigmas) != 4:
            raise ValueError("quad needs exactly four values and four sigmas")
        for w in self.values:
            if not (math.isfinite(w) and w >= 0.0):
                raise ValueError(f"combination magnitudes must be >= 0, got {w!r}")
        for s in self.sigmas:
            if not (math.isfinite(s) and s >= 0.0):
                raise ValueError(f"sigmas must be >= 0, got {s!r}")
        object.__setattr__(self, "values", tuple(float(w) for w in self.values))
        object.__setattr__(self, "sigmas", tuple(float(s) for s in self.sigmas))

    @classmethod
    def from_fractional(cls, values, fractional) -> "FrequencyQuad":
        return cls(
            values=tuple(float(w) for w in values),
            sigmas=tuple(float(w) * float(f) for w, f in zip(values, fractional)),
        )


@dataclass(frozen=True)
class ReconstructionResult:
    """Best-fit couplings with propagated uncertainties and fit diagnostics."""

    c_hat: HamiltonianParams
    sigma: tuple[float, float, float]
    residual: float
    convention: str = SIGN_CONVENTION
    candidates_considered: int = 16


@dataclass(frozen=True)
class CharacterizationReport:
    """Everything the four-input pipeline learned in one run."""

    result: ReconstructionResult
    quad: FrequencyQuad
    estimates: dict[str, FrequencyEstimate]
    degenerate: dict[str, bool]
    seed: int
    mode: str
    eta: float


def combinations(h: HamiltonianParams) -> np.ndarray:
    """Signed combinations (c1-c2, c1+c2, c2-c3, c2+c3)."""
    return COMBINATION_MATRIX @ np.array(h.as_tuple())


def quad_from_params(h: HamiltonianParams, fractional: float = 0.0) -> FrequencyQuad:
    """Exact combination magnitudes of known couplings, optionally with uniform fractional sigmas."""
    mags = np.abs(combinations(h))
    return FrequencyQuad(
        values=tuple(float(w) for w in mags),
        sigmas=tuple(float(w) * fractional for w in mags),
    )


def invert_frequencies(quad: FrequencyQuad, residual_tolerance_factor: float = 3.0) -> ReconstructionResult:
    """Recover couplings from the four combination magnitudes.

    All 16 sign assignments are solved in least squares against the combination
    map; candidates violating the c2 >= 0 convention are dropped (their mirror
    image has identical residual), the minimum-residual survivor wins, and exact
    ties break deterministically toward larger c2, then c3, then c1.  If even
    the best candidate misses by more than residual_tolerance_factor times the
    propagated frequency noise, the quad is declared inconsistent.
    """
    w = np.asarray(quad.values, dtype=float)
    sig = np.asarray(quad.sigmas, dtype=float)
    candidates = []
    for signs in itertools.product((1.0, -1.0), repeat=4):
        y = np.asarray(signs) * w
        c, *_ = np.linalg.lstsq(COMBINATION_MATRIX, y, rcond=None)
        residual = float(np.linalg.norm(COMBINATION_MATRIX @ c - y))
        candidates.append((residual, c))
    eligible = [(r, c) for r, c in candidates if c[1] >= -1e-12]
    best_residual, best_c = min(eligible, key=lambda rc: (rc[0], -rc[1][1], -rc[1][2], -rc[1][0]))

    noise = float(np.linalg.norm(sig))
    scale = max(float(w.max()), 1.0)
    floor = max(noise, 1e-9 * scale)
    if best_residual > residual_tolerance_factor * floor:
        raise InconsistentFrequencyError(
            f"no sign assignment fits the quad {quad.values}: best residual "
            f"{best_residual:.3e} exceeds {residual_tolerance_factor} x noise floor {floor:.3e}"
        )

    # Linear propagation through the pseudoinverse used by the fit.
    pinv = np.linalg.pinv(COMBINATION_MATRIX)
    cov = pinv @ np.diag(sig**2) @ pinv.T
    sigma = tuple(float(s) for s in np.sqrt(np.diag(cov)))

    c1, c2, c3 = (float(v) for v in best_c)
    if -1e-12 <= c2 < 0.0:
        c2 = 0.0
    return ReconstructionResult(
        c_hat=HamiltonianParams(c1, c2, c3),
        sigma=sigma,
        residual=best_residual,
        convention=SIGN_CONVENTION,
        candidates_considered=len(candidates),
    )


def invert_three_state(w1_signed: float, w2_signed: float, w3_signed: float) -> HamiltonianParams:
    """Direct inversion when signed combinations from the first three inputs are known.

    Given w1 = c1 - c2, w2 = c1 + c2, w3 = c2 - c3 with signs already resolved:
    c1 = (w2 + w1)/2, c2 = (w2 - w1)/2, c3 = c2 - w3.
    """
    c1 = 0.5 * (w2_signed + w1_signed)
    c2 = 0.5 * (w2_signed - w1_signed)
    return HamiltonianParams(c1, c2, c2 - w3_signed)


def default_plans(
    h_guess: HamiltonianParams, nt: int, ne: int, strategy: str = "uniform"
) -> dict[str, SamplingPlan]:
    """Per-input observation plans from a prior guess of the couplings.

    A combination too small to plan around (including exactly degenerate ones)
    borrows the largest combination's time step so its flat trace is still
    recorded on a sensible grid.
    """
    mags = np.abs(combinations(h_guess))
    largest = float(mags.max())
    if largest <= 0.0:
        raise ValueError("all coupling combinations vanish; nothing to observe")
    plans = {}
    for input_id, w in zip(INPUT_IDS, mags):
        guess = float(w) if w > 1e-9 * largest else largest
        plans[input_id] = plan_observation(guess, nt, ne, strategy)
    return plans


def simulate_series(
    h: HamiltonianParams,
    input_id: str,
    plan: SamplingPlan,
    seed: int,
    eta: float = 0.0,
    mode: str = "sampled",
) -> ConcurrenceSeries:
    """Run one input through prepare/evolve/measure and estimate C^2 on the grid.

    mode "sampled" draws finite-shot counts from per-point seeded streams;
    "noiseless" keeps the exact probability tables.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    channel = CHANNEL_FOR_INPUT[input_id]
    basis = BASIS_BY_TAG[channel]
    psi0 = prepare_input(PrepSpec(input_id, eta))
    data = []
    for j, t in enumerate(plan.times()):
        table = outcome_probs(evolve(h, psi0, float(t)), basis)
        if mode == "noiseless":
            data.append(table)
        else:
            rng = point_rng(seed, input_id, j, channel)
            data.append(sample_counts(table, plan.shots_at(j), rng))
    kwargs = {"counts_zz": data} if channel == "zz" else {"counts_xz": data}
    return build_series(input_id, plan, **kwargs)


def estimate_combination(
    series: ConcurrenceSeries, plan: SamplingPlan
) -> tuple[float, float, FrequencyEstimate | None, bool]:
    """Estimate one combination magnitude from a series.

    Returns (value, sigma_abs, estimate_or_None, degenerate).  A series with no
    oscillation power, or whose refined line would sit below one DFT bin, snaps
    to the degenerate value 0 with a one-bin absolute uncertainty.
    """
    one_bin_sigma = plan.bin_width / 4.0
    try:
        peak = find_peak(dft(series))
    except NoOscillationError:
        return 0.0, one_bin_sigma, None, True
    estimate = refine_frequency(series, peak.omega, plan)
    if 4.0 * estimate.omega_hat < plan.bin_width:
        return 0.0, one_bin_sigma, estimate, True
    return estimate.omega_hat, estimate.sigma, estimate, False


def characterize(
    h_true: HamiltonianParams,
    plans: dict[str, SamplingPlan],
    seed: int,
    eta: float = 0.0,
    mode: str = "sampled",
) -> CharacterizationReport:
    """Full four-input pipeline: simulate, estimate frequencies, invert couplings."""
    values = []
    sigmas = []
    estimates: dict[str, FrequencyEstimate] = {}
    degenerate: dict[str, bool] = {}
    for input_id in INPUT_IDS:
        plan = plans[input_id]
        series = simulate_series(h_true, input_id, plan, seed, eta=eta, mode=mode)
        value, sigma, estimate, is_degenerate = estimate_combination(series, plan)
        values.append(value)
        sigmas.append(sigma)
        degenerate[input_id] = is_degenerate
        if estimate is not None:
            estimates[input_id] = estimate
    quad = FrequencyQuad(values=tuple(values), sigmas=tuple(sigmas))
    result = invert_frequencies(quad)
    return CharacterizationReport(
        result=result,
        quad=quad,
        estimates=estimates,
        degenerate=degenerate,
        seed=int(seed),
        mode=mode,
        eta=float(eta),
    )
