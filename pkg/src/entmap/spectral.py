"""Observation planning, discrete spectra, and oscillation-frequency refinement.

A concurrence trace C^2(t) = sin^2(2 w t) oscillates at angular frequency 4w, so
planning targets 4w when picking the sampling step and estimates are mapped back
down at the end: the refined fit works at 2w (the sin^2 argument rate) and
reports w itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

# Sampling margin above Nyquist for the fastest expected spectral line.
NYQUIST_MARGIN = 1.25

STRATEGIES = ("uniform", "endpoint")

# Shots spent at each interior time point by the endpoint strategy.
ENDPOINT_INTERIOR_SHOTS = 2


class NoOscillationError(RuntimeError):
    """Raised when a spectrum carries no usable oscillation power."""


@dataclass(frozen=True)
class SamplingPlan:
    """Time grid t_j = j*dt for j = 1..nt, plus the shot budget per point.

    uniform: ne_per_point shots at every time point.
    endpoint: ENDPOINT_INTERIOR_SHOTS shots at interior points and ne_endpoint
    at each of the final two, concentrating statistics where the phase lever arm
    is longest.
    """

    nt: int
    dt: float
    strategy: str = "uniform"
    ne_per_point: int = 1
    ne_endpoint: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.nt, (int, np.integer)) or self.nt < 4:
            raise ValueError(f"nt must be an integer >= 4, got {self.nt!r}")
        if not (isinstance(self.dt, (int, float)) and math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be a positive finite number, got {self.dt!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.strategy == "uniform" and self.ne_per_point < 1:
            raise ValueError("uniform strategy needs ne_per_point >= 1")
        if self.strategy == "endpoint" and self.ne_endpoint < 1:
            raise ValueError("endpoint strategy needs ne_endpoint >= 1")

    @property
    def ne(self) -> int:
        """Per-point budget figure entering the resolution formula."""
        return self.ne_endpoint if self.strategy == "endpoint" else self.ne_per_point

    def times(self) -> np.ndarray:
        return self.dt * np.arange(1, self.nt + 1)

    @property
    def observation_time(self) -> float:
        return self.nt * self.dt

    def shots_at(self, index: int) -> int:
        if not 0 <= index < self.nt:
            raise ValueError(f"time index {index} outside 0..{self.nt - 1}")
        if self.strategy == "endpoint":
            return self.ne_endpoint if index >= self.nt - 2 else ENDPOINT_INTERIOR_SHOTS
        return self.ne_per_point

    def total_measurements(self) -> int:
        """Budget figure N; the endpoint strategy uses the 2*nt + 2*ne accounting."""
        if self.strategy == "endpoint":
            return 2 * self.nt + 2 * self.ne_endpoint
        return self.nt * self.ne_per_point

    @property
    def bin_width(self) -> float:
        """Angular-frequency spacing of the DFT grid for this time grid."""
        return 2.0 * math.pi / (self.nt * self.dt)


@dataclass(frozen=True)
class Spectrum:
    """One-sided magnitude spectrum on an angular-frequency grid."""

    omegas: np.ndarray
    magnitudes: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.omegas, dtype=float)
        m = np.asarray(self.magnitudes, dtype=float)
        if w.shape != m.shape or w.ndim != 1:
            raise ValueError("omegas and magnitudes must be 1-d arrays of equal length")
        object.__setattr__(self, "omegas", w)
        object.__setattr__(self, "magnitudes", m)

    @property
    def bin_width(self) -> float:
        return float(self.omegas[1] - self.omegas[0])


@dataclass(frozen=True)
class PeakLocation:
    bin_index: int
    omega: float
    magnitude: float


@dataclass(frozen=True)
class FrequencyEstimate:
    """Refined coupling-combination magnitude with its fractional resolution.

    omega_hat is the estimate of |c_i +/- c_j|; the raw spectral peak sits at
    4 * omega_hat.  fallback marks estimates where the fit did not converge and
    the coarse peak was kept with one-bin uncertainty.
    """

    omega_hat: float
    delta_f_over_f: float
    raw_peak_omega: float
    fallback: bool = False

    @property
    def sigma(self) -> float:
        return self.omega_hat * self.delta_f_over_f


def plan_observation(omega_guess: float, nt: int, ne: int, strategy: str = "uniform") -> SamplingPlan:
    """Pick dt so the expected line at 4*omega_guess sits below Nyquist by NYQUIST_MARGIN.

    dt = 2*pi / (2 * margin * 4 * omega_guess) = pi / (5 * omega_guess) at the
    default margin.  With that step the expected line lands exactly on DFT bin
    0.4*nt whenever that is an integer.
    """
    if not (isinstance(omega_guess, (int, float)) and math.isfinite(omega_guess) and omega_guess > 0):
        raise ValueError(
            f"omega_guess must be positive and finite, got {omega_guess!r}; "
            "degenerate (zero) combinations take the DC path in the reconstruction layer"
        )
    if ne < 1:
        raise ValueError(f"ne must be >= 1, got {ne!r}")
    dt = 2.0 * math.pi / (2.0 * NYQUIST_MARGIN * 4.0 * omega_guess)
    if strategy == "endpoint":
        return SamplingPlan(nt=nt, dt=dt, strategy="endpoint", ne_endpoint=ne)
    if strategy == "uniform":
        return SamplingPlan(nt=nt, dt=dt, strategy="uniform", ne_per_point=ne)
    raise ValueError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")


def _series_arrays(series) -> tuple[np.ndarray, np.ndarray, float]:
    times = np.asarray(series.times, dtype=float)
    values = np.asarray(series.values, dtype=float)
    if times.size != values.size or times.size < 4:
        raise ValueError("series needs at least 4 aligned time points")
    steps = np.diff(times)
    dt = float(series.dt)
    if float(np.abs(steps - dt).max()) > 1e-9 * dt:
        raise ValueError("series time grid is not uniform")
    return times, values, dt


def dft(series) -> Spectrum:
    """Magnitude of the one-sided DFT of the mean-subtracted series.

    The frequency grid is 2*pi*k/(nt*dt) for k = 0..nt//2.
    """
    _, values, dt = _series_arrays(series)
    centered = values - values.mean()
    magnitudes = np.abs(np.fft.rfft(centered))
    omegas = 2.0 * math.pi * np.fft.rfftfreq(values.size, d=dt)
    return Spectrum(omegas, magnitudes)


def find_peak(spectrum: Spectrum) -> PeakLocation:
    """Dominant bin of the spectrum, excluding the DC bin and its neighbor.

    Ties resolve to the lower bin.  A spectrum with no power above numerical
    dust raises NoOscillationError; callers treat that as a degenerate (zero)
    combination frequency.
    """
    mags = spectrum.magnitudes
    if mags.size < 3:
        raise ValueError("spectrum too short to search for a peak")
    search = mags[2:]
    best = int(np.argmax(search)) + 2
    # Mean subtraction leaves only rounding noise when nothing oscillates.
    if float(mags[best]) <= 1e-9 * mags.size:
        raise NoOscillationError("spectrum carries no oscillation power above numerical noise")
    return PeakLocation(bin_index=best, omega=float(spectrum.omegas[best]), magnitude=float(mags[best]))


def _rival_peaks(series, coarse_peak_omega: float, bin_w: float, limit: int = 2) -> list[float]:
    """Strongest spectral local maxima away from the coarse peak.

    Supplies alternative fit seeds for refine_frequency; bins within two bins
    of the coarse peak are its own leakage skirt and are skipped.
    """
    spectrum = dft(series)
    mags = spectrum.magnitudes
    rivals = []
    for k in range(2, mags.size - 1):
        if mags[k] >= mags[k - 1] and mags[k] >= mags[k + 1]:
            if abs(spectrum.omegas[k] - coarse_peak_omega) > 2.0 * bin_w:
                rivals.append((float(mags[k]), float(spectrum.omegas[k])))
    rivals.sort(reverse=True)
    return [omega for _, omega in rivals[:limit]]


def _endpoint_amplitude(series, shots_end: float) -> float:
    """Expected oscillation amplitude of the estimator at the endpoint blocks.

    The product-form estimator (zz counts only) shrinks the signal by exactly
    1 - 1/shots; the trigonometric estimators are unbiased to O(1/shots), so
    series that involve the xz channel keep the ideal amplitude 1.
    """
    points = getattr(series, "points", None)
    if points and shots_end >= 2.0:
        if all(getattr(p, "shots_xz", 0) == 0 for p in points):
            return 1.0 - 1.0 / shots_end
    return 1.0


def _endpoint_phase_polish(
    times: np.ndarray, values: np.ndarray, w_anchor: float, amplitude: float
) -> float:
    """Refine the sin^2 rate using only the two final high-budget points.

    The anchor fixes the oscillation cycle; within half a cycle spacing the
    rate is re-solved from the endpoint values against the pinned model
    amplitude*sin^2(w t).  Pinning both amplitude and offset leaves a single
    unknown for two observations, so the minimum is set by the measured phase
    rather than by exact two-point interpolation.
    """
    t_end = times[-2:]
    y_end = values[-2:]
    half_window = 0.45 * math.pi / float(times[-1])

    def endpoint_sse(w: float) -> float:
        r = amplitude * np.sin(w * t_end) ** 2 - y_end
        return float(r @ r)

    result = minimize_scalar(
        endpoint_sse,
        bounds=(w_anchor - half_window, w_anchor + half_window),
        method="bounded",
        options={"xatol": 1e-13},
    )
    return float(result.x)


def refine_frequency(series, coarse_peak_omega: float, plan: SamplingPlan) -> FrequencyEstimate:
    """Least-squares refinement of the coarse spectral peak.

    Fits a*sin^2(w t) + b with the amplitude and offset profiled out exactly
    (they enter linearly), locating w by a deterministic grid-plus-Brent
    search of the one-dimensional profiled objective within 1.5 spectral bins
    of a candidate line; residuals are weighted by per-point shot counts.
    Candidates are the supplied coarse peak plus the next-strongest spectral
    local maxima, and the best weighted fit wins: with few shots per point a
    noise bin occasionally outranks the true line in raw magnitude, but it
    cannot out-fit it.  For the endpoint strategy the fit uses the interior
    points only (their uniform shot count keeps the finite-shot amplitude
    shrink homogeneous) and the fitted rate then anchors a phase polish
    against the two high-budget endpoint blocks.  Returns the combination
    magnitude omega_hat = w/2 and the resolution figure delta_f_over_f =
    4/(nt*sqrt(ne)).  A non-positive fitted amplitude means no oscillation was
    locked; that falls back to the coarse estimate with one-bin uncertainty.
    """
    if not (math.isfinite(coarse_peak_omega) and coarse_peak_omega > 0):
        raise ValueError(f"coarse_peak_omega must be positive, got {coarse_peak_omega!r}")
    times, values, _ = _series_arrays(series)
    shots = np.asarray(getattr(series, "shots_per_point", np.zeros(times.size)), dtype=float)
    weights = np.maximum(shots, 1.0)

    fit_sel = slice(None)
    if plan.strategy == "endpoint" and times.size >= 8:
        fit_sel = slice(0, times.size - 2)
    t_fit = times[fit_sel]
    v_fit = values[fit_sel]
    wt_fit = np.sqrt(weights[fit_sel])

    def profiled(w: float):
        design = np.column_stack([np.sin(w * t_fit) ** 2, np.ones_like(t_fit)])
        design *= wt_fit[:, None]
        coef, _, _, _ = np.linalg.lstsq(design, v_fit * wt_fit, rcond=None)
        r = design @ coef - v_fit * wt_fit
        return float(r @ r), coef

    bin_w = plan.bin_width

    def fit_near(center_omega: float):
        w_lo = max((center_omega - 1.5 * bin_w) / 2.0, 0.25 * bin_w)
        w_hi = (center_omega + 1.5 * bin_w) / 2.0
        grid = np.linspace(w_lo, w_hi, 121)
        sse_grid = np.array([profiled(w)[0] for w in grid])
        k = int(sse_grid.argmin())
        bracket_lo = float(grid[max(k - 1, 0)])
        bracket_hi = float(grid[min(k + 1, grid.size - 1)])
        best = minimize_scalar(
            lambda w: profiled(w)[0],
            bounds=(bracket_lo, bracket_hi),
            method="bounded",
            options={"xatol": 1e-13},
        )
        w_best = float(best.x)
        sse_best, coef_best = profiled(w_best)
        return sse_best, w_best, float(coef_best[0])

    candidates = [coarse_peak_omega]
    candidates.extend(_rival_peaks(series, coarse_peak_omega, bin_w))
    fits = sorted(fit_near(c) for c in candidates)
    usable = [f for f in fits if math.isfinite(f[1]) and f[2] > 0.0]
    if not usable:
        return FrequencyEstimate(
            omega_hat=coarse_peak_omega / 4.0,
            delta_f_over_f=bin_w / coarse_peak_omega,
            raw_peak_omega=coarse_peak_omega,
            fallback=True,
        )
    _, w_fit, _ = usable[0]
    if plan.strategy == "endpoint":
        shots_end = float(shots[-1]) if shots.size else float(plan.ne)
        if shots_end >= 2.0:
            amplitude = _endpoint_amplitude(series, shots_end)
            w_fit = _endpoint_phase_polish(times, values, w_fit, amplitude)
    return FrequencyEstimate(
        omega_hat=w_fit / 2.0,
        delta_f_over_f=4.0 / (plan.nt * math.sqrt(plan.ne)),
        raw_peak_omega=coarse_peak_omega,
        fallback=False,
    )
