"""Squared-concurrence estimation from measurement statistics.

Two channels suffice for the protocol inputs: both qubits in Z (the zz channel)
and qubit 1 in X with qubit 2 in Z (the xz channel).  Writing the state as
(a, b, c, d) over the computational basis, the zz channel gives the four
moduli and the xz channel fixes the two relative phases that enter the
concurrence: A between a and c, B between d and b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measure import OutcomeCounts, ProbTable, empirical_probs
from .qcore import INPUT_IDS, PSI1, PSI2, PSI3, PSI4
from .spectral import SamplingPlan

# Channel carrying the oscillation for each protocol input.
CHANNEL_FOR_INPUT = {PSI1: "zz", PSI2: "zz", PSI3: "xz", PSI4: "xz"}


@dataclass(frozen=True)
class ConcurrencePoint:
    """One estimated C^2 value on the time grid, with the shots that produced it."""

    time: float
    c2_estimate: float
    shots_zz: int = 0
    shots_xz: int = 0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.time) and self.time > 0):
            raise ValueError(f"time must be positive and finite, got {self.time!r}")
        if not (0.0 <= self.c2_estimate <= 1.0):
            raise ValueError(f"c2_estimate must lie in [0, 1], got {self.c2_estimate!r}")
        if self.shots_zz < 0 or self.shots_xz < 0:
            raise ValueError("shot counts must be nonnegative")


@dataclass(frozen=True)
class ConcurrenceSeries:
    """C^2 estimates on a uniform grid t_j = j*dt, j = 1..nt."""

    dt: float
    points: tuple[ConcurrencePoint, ...]

    def __post_init__(self) -> None:
        if not (isinstance(self.dt, (int, float)) and math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive and finite, got {self.dt!r}")
        if len(self.points) < 4:
            raise ValueError("series needs at least 4 points")
        times = np.array([p.time for p in self.points])
        expected = self.dt * np.arange(1, len(self.points) + 1)
        if float(np.abs(times - expected).max()) > 1e-9 * self.dt:
            raise ValueError("points must sit on the uniform grid j*dt without gaps")
        object.__setattr__(self, "points", tuple(self.points))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def times(self) -> np.ndarray:
        return np.array([p.time for p in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([p.c2_estimate for p in self.points])

    @property
    def shots_per_point(self) -> np.ndarray:
        return np.array([p.shots_zz + p.shots_xz for p in self.points])


def _clamped_cosine(numerator: float, denominator: float) -> float:
    # Convention for vanishing amplitude pairs: the phase is unobservable, take cos = 0.
    if denominator <= 0.0:
        return 0.0
    return min(1.0, max(-1.0, numerator / denominator))


def _cos_angle_sum(cos_a: float, cos_b: float) -> float:
    # Positive-root convention: both sines taken as +sqrt(1 - cos^2).
    sin_a = math.sqrt(max(0.0, 1.0 - cos_a * cos_a))
    sin_b = math.sqrt(max(0.0, 1.0 - cos_b * cos_b))
    return cos_a * cos_b - sin_a * sin_b


def _as_probs(source) -> np.ndarray:
    if isinstance(source, ProbTable):
        return source.probabilities
    if isinstance(source, OutcomeCounts):
        return empirical_probs(source).probabilities
    raise TypeError(f"expected ProbTable or OutcomeCounts, got {type(source).__name__}")


def concurrence_sq_from_probs(p_zz, p_xz) -> float:
    """General two-channel estimator of the squared concurrence.

    With zz probabilities (P++, P+-, P-+, P--) and xz probabilities giving the
    phase cosines

        cos A = (2*Pxz++ - P++ - P-+) / (2*sqrt(P++ * P-+))
        cos B = (2*Pxz+- - P+- - P--) / (2*sqrt(P+- * P--))

    the estimator is

        C^2 = 4*(P-+*P+- + P--*P++ - 2*sqrt(P++*P+-*P-+*P--)*cos(A+B)).

    Cosines are clamped to [-1, 1], a vanishing denominator pins the cosine to
    0, and the result is clamped to [0, 1].
    """
    pp, pm, mp, mm = _as_probs(p_zz)
    x = _as_probs(p_xz)
    xpp, xpm = float(x[0]), float(x[1])
    cos_a = _clamped_cosine(2.0 * xpp - pp - mp, 2.0 * math.sqrt(pp * mp))
    cos_b = _clamped_cosine(2.0 * xpm - pm - mm, 2.0 * math.sqrt(pm * mm))
    cross = math.sqrt(pp * pm * mp * mm) * _cos_angle_sum(cos_a, cos_b)
    value = 4.0 * (mp * pm + mm * pp - 2.0 * cross)
    return min(max(value, 0.0), 1.0)


def concurrence_sq_reduced(input_id: str, counts_zz=None, counts_xz=None) -> float:
    """Single-channel estimator specialized to one protocol input.

    psi1 and psi2 keep two zz outcomes pinned at zero, so only the zz channel
    is needed: C^2 = 4*P--*P++ for psi1 and 4*P-+*P+- for psi2.  psi3 and psi4
    pin all zz probabilities at 1/4, so only the xz channel is needed:
    cos A = 4*Pxz++ - 1, cos B = 4*Pxz+- - 1 and C^2 = (1 - cos(A+B))/2.

    Accepts ProbTable (exact) or OutcomeCounts (finite shots) per channel.
    """
    if input_id not in INPUT_IDS:
        raise ValueError(f"unknown input id {input_id!r}")
    if input_id in (PSI1, PSI2):
        if counts_zz is None:
            raise ValueError(f"{input_id} estimation needs the zz channel")
        pp, pm, mp, mm = _as_probs(counts_zz)
        value = 4.0 * mm * pp if input_id == PSI1 else 4.0 * mp * pm
        return min(max(float(value), 0.0), 1.0)
    if counts_xz is None:
        raise ValueError(f"{input_id} estimation needs the xz channel")
    x = _as_probs(counts_xz)
    cos_a = min(1.0, max(-1.0, 4.0 * float(x[0]) - 1.0))
    cos_b = min(1.0, max(-1.0, 4.0 * float(x[1]) - 1.0))
    value = 0.5 * (1.0 - _cos_angle_sum(cos_a, cos_b))
    return min(max(value, 0.0), 1.0)


def build_series(input_id: str, plan: SamplingPlan, counts_zz=None, counts_xz=None) -> ConcurrenceSeries:
    """Assemble a ConcurrenceSeries from per-point channel data on a plan's grid.

    counts_zz / counts_xz are sequences aligned with plan.times(); whichever
    channel the input needs must be present and complete.
    """
    needed = CHANNEL_FOR_INPUT[input_id] if input_id in CHANNEL_FOR_INPUT else None
    if input_id not in INPUT_IDS:
        raise ValueError(f"unknown input id {input_id!r}")
    source = counts_zz if needed == "zz" else counts_xz
    if source is None or len(source) != plan.nt:
        raise ValueError(
            f"{input_id} needs {plan.nt} points of {needed} data, got "
            f"{0 if source is None else len(source)}"
        )
    points = []
    for j in range(plan.nt):
        t = (j + 1) * plan.dt
        cz = counts_zz[j] if counts_zz is not None else None
        cx = counts_xz[j] if counts_xz is not None else None
        estimate = concurrence_sq_reduced(input_id, counts_zz=cz, counts_xz=cx)
        points.append(
            ConcurrencePoint(
                time=t,
                c2_estimate=estimate,
                shots_zz=cz.shots if isinstance(cz, OutcomeCounts) else 0,
                shots_xz=cx.shots if isinstance(cx, OutcomeCounts) else 0,
            )
        )
    return ConcurrenceSeries(dt=plan.dt, points=tuple(points))
