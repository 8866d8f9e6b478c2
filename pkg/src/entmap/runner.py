"""Config-driven CLI for the simulation and characterization experiments.

Subcommands mirror the experiment set: simulate (concurrence traces), spectrum
(DFT of the traces), characterize (full coupling reconstruction), gate-error
(budget curves and threshold solving), robustness (imperfect-preparation sweep).
All artifacts are CSV/JSON, carry a hash of the resolved config, and are byte
reproducible for a fixed config and seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import platform
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .concest import ConcurrencePoint, ConcurrenceSeries
from .gateerr import GATE_ISING_CNOT, GATES, budget_curve, measurements_for_threshold
from .measure import PrepSpec, prepare_input
from .qcore import (
    INPUT_IDS,
    PSI1,
    HamiltonianParams,
    concurrence_sq_exact,
    evolve,
    imperfect_prep_concurrence_sq,
)
from .recon import (
    InconsistentFrequencyError,
    characterize,
    combinations,
    default_plans,
    simulate_series,
)
from .spectral import NoOscillationError, SamplingPlan, dft, find_peak, plan_observation

DEFAULT_NT = 200
DEFAULT_NE = 10
DEFAULT_OUT = "runs/run"
SEED_ENV_VAR = "ENTMAP_SEED"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INCONSISTENT = 3
EXIT_IO = 4


class ConfigError(Exception):
    """Invalid configuration; the message names the offending key."""


def _fmt(x: float) -> str:
    """17 significant digits round-trips any double exactly."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class RobustnessConfig:
    etas: tuple[float, ...]
    nt: int
    ne: int


@dataclass(frozen=True)
class ExperimentConfig:
    hamiltonian: HamiltonianParams
    nt: int
    ne: int
    strategy: str
    plan_overrides: dict
    eta: float
    seed: int
    mode: str
    out: Path
    robustness: RobustnessConfig
    payload: dict

    @property
    def config_hash(self) -> str:
        blob = json.dumps(self.payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class RunArtifacts:
    out_dir: Path
    files: tuple[str, ...]
    config_hash: str


def _expect(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise ConfigError(f"{path}: {message}")


def _get_number(raw: dict, key: str, path: str, default=None):
    if key not in raw:
        _expect(default is not None, f"{path}.{key}", "required key is missing")
        return default
    value = raw[key]
    _expect(
        isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value),
        f"{path}.{key}",
        f"expected a finite number, got {value!r}",
    )
    return value


def _get_int(raw: dict, key: str, path: str, default=None, minimum=None):
    value = _get_number(raw, key, path, default)
    _expect(float(value).is_integer(), f"{path}.{key}", f"expected an integer, got {value!r}")
    value = int(value)
    if minimum is not None:
        _expect(value >= minimum, f"{path}.{key}", f"must be >= {minimum}, got {value}")
    return value


def load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    _expect(isinstance(raw, dict), path, "top level must be a JSON object")
    return raw


_TOP_KEYS = {"hamiltonian", "plan", "plans", "eta", "seed", "mode", "out", "robustness"}
_PLAN_KEYS = {"nt", "ne", "strategy"}
_OVERRIDE_KEYS = {"nt", "ne", "dt", "strategy"}


def resolve_config(raw: dict, args=None) -> ExperimentConfig:
    """Validate the raw config and fold in CLI/env overrides.

    Seed priority: ENTMAP_SEED env var, then --seed, then the config file.
    """
    for key in raw:
        _expect(key in _TOP_KEYS, key, f"unknown config key (known: {sorted(_TOP_KEYS)})")

    ham_raw = raw.get("hamiltonian")
    _expect(isinstance(ham_raw, dict), "hamiltonian", "required object {c1, c2, c3} is missing")
    for key in ham_raw:
        _expect(key in ("c1", "c2", "c3"), f"hamiltonian.{key}", "unknown key")
    h = HamiltonianParams(
        float(_get_number(ham_raw, "c1", "hamiltonian")),
        float(_get_number(ham_raw, "c2", "hamiltonian")),
        float(_get_number(ham_raw, "c3", "hamiltonian")),
    )

    plan_raw = raw.get("plan", {})
    _expect(isinstance(plan_raw, dict), "plan", "must be an object")
    for key in plan_raw:
        _expect(key in _PLAN_KEYS, f"plan.{key}", "unknown key")
    nt = _get_int(plan_raw, "nt", "plan", default=DEFAULT_NT, minimum=4)
    ne = _get_int(plan_raw, "ne", "plan", default=DEFAULT_NE, minimum=1)
    strategy = plan_raw.get("strategy", "uniform")
    _expect(strategy in ("uniform", "endpoint"), "plan.strategy", f"must be uniform or endpoint, got {strategy!r}")

    overrides_raw = raw.get("plans", {})
    _expect(isinstance(overrides_raw, dict), "plans", "must be an object keyed by input id")
    plan_overrides: dict = {}
    for input_id, override in overrides_raw.items():
        _expect(input_id in INPUT_IDS, f"plans.{input_id}", f"unknown input id (known: {list(INPUT_IDS)})")
        _expect(isinstance(override, dict), f"plans.{input_id}", "must be an object")
        for key in override:
            _expect(key in _OVERRIDE_KEYS, f"plans.{input_id}.{key}", "unknown key")
        entry = {
            "nt": _get_int(override, "nt", f"plans.{input_id}", default=nt, minimum=4),
            "ne": _get_int(override, "ne", f"plans.{input_id}", default=ne, minimum=1),
            "strategy": override.get("strategy", strategy),
        }
        _expect(
            entry["strategy"] in ("uniform", "endpoint"),
            f"plans.{input_id}.strategy",
            f"must be uniform or endpoint, got {entry['strategy']!r}",
        )
        if "dt" in override:
            dt = _get_number(override, "dt", f"plans.{input_id}")
            _expect(dt > 0, f"plans.{input_id}.dt", f"must be positive, got {dt!r}")
            entry["dt"] = float(dt)
        plan_overrides[input_id] = entry

    eta = float(_get_number(raw, "eta", "config", default=0.0))
    _expect(0.0 <= eta < 1.0, "eta", f"must lie in [0, 1), got {eta!r}")

    seed = _get_int(raw, "seed", "config", default=0)
    if args is not None and getattr(args, "seed", None) is not None:
        seed = int(args.seed)
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR}: expected an integer, got {env_seed!r}") from None
    _expect(0 <= seed < 2**64, "seed", f"must fit in 64 bits, got {seed}")

    mode = raw.get("mode", "sampled")
    if args is not None and getattr(args, "mode", None) is not None:
        mode = args.mode
    _expect(mode in ("sampled", "noiseless"), "mode", f"must be sampled or noiseless, got {mode!r}")

    out = raw.get("out", DEFAULT_OUT)
    if args is not None and getattr(args, "out", None) is not None:
        out = args.out
    _expect(isinstance(out, str) and out, "out", "must be a nonempty path string")

    rob_raw = raw.get("robustness", {})
    _expect(isinstance(rob_raw, dict), "robustness", "must be an object")
    for key in rob_raw:
        _expect(key in ("etas", "nt", "ne"), f"robustness.{key}", "unknown key")
    etas_raw = rob_raw.get("etas", [0.0, 0.05])
    _expect(
        isinstance(etas_raw, list) and len(etas_raw) > 0,
        "robustness.etas",
        "must be a nonempty list",
    )
    etas = []
    for i, value in enumerate(etas_raw):
        _expect(
            isinstance(value, (int, float)) and not isinstance(value, bool) and 0.0 <= value <= 0.2,
            f"robustness.etas[{i}]",
            f"must lie in [0, 0.2], got {value!r}",
        )
        etas.append(float(value))
    rob = RobustnessConfig(
        etas=tuple(etas),
        nt=_get_int(rob_raw, "nt", "robustness", default=nt, minimum=4),
        ne=_get_int(rob_raw, "ne", "robustness", default=ne, minimum=1),
    )

    # Canonical payload for hashing: physics and seeding, not output placement.
    payload = {
        "hamiltonian": {"c1": h.c1, "c2": h.c2, "c3": h.c3},
        "plan": {"nt": nt, "ne": ne, "strategy": strategy},
        "plans": plan_overrides,
        "eta": eta,
        "seed": seed,
        "mode": mode,
        "robustness": {"etas": list(rob.etas), "nt": rob.nt, "ne": rob.ne},
    }
    return ExperimentConfig(
        hamiltonian=h,
        nt=nt,
        ne=ne,
        strategy=strategy,
        plan_overrides=plan_overrides,
        eta=eta,
        seed=seed,
        mode=mode,
        out=Path(out),
        robustness=rob,
        payload=payload,
    )


def build_plans(cfg: ExperimentConfig) -> dict[str, SamplingPlan]:
    try:
        plans = default_plans(cfg.hamiltonian, cfg.nt, cfg.ne, cfg.strategy)
    except ValueError as exc:
        raise ConfigError(f"hamiltonian: {exc}") from exc
    mags = np.abs(combinations(cfg.hamiltonian))
    largest = float(mags.max())
    for input_id, entry in cfg.plan_overrides.items():
        if "dt" in entry:
            kwargs = (
                {"ne_endpoint": entry["ne"]}
                if entry["strategy"] == "endpoint"
                else {"ne_per_point": entry["ne"]}
            )
            plans[input_id] = SamplingPlan(
                nt=entry["nt"], dt=entry["dt"], strategy=entry["strategy"], **kwargs
            )
        else:
            w = float(mags[INPUT_IDS.index(input_id)])
            guess = w if w > 1e-9 * largest else largest
            plans[input_id] = plan_observation(guess, entry["nt"], entry["ne"], entry["strategy"])
    return plans


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _write_json(path: Path, payload: dict) -> None:
    _write_text(path, json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _write_manifest(cfg: ExperimentConfig, command: str, files: list[str]) -> None:
    manifest = {
        "command": command,
        "config": cfg.payload,
        "config_hash": cfg.config_hash,
        "files": sorted(files),
        "seed": cfg.seed,
        "versions": {
            "entmap": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
            "scipy": scipy.__version__,
        },
    }
    _write_json(cfg.out / "manifest.json", manifest)


def _series_csv(series: ConcurrenceSeries, config_hash: str) -> str:
    lines = [f"# config_hash={config_hash}", "t,c2_estimate,shots_zz,shots_xz"]
    for p in series.points:
        lines.append(f"{_fmt(p.time)},{_fmt(p.c2_estimate)},{p.shots_zz},{p.shots_xz}")
    return "\n".join(lines) + "\n"


def _read_series_csv(path: Path, expected_hash: str) -> ConcurrenceSeries:
    if not path.exists():
        raise FileNotFoundError(f"{path}: series file missing; run simulate first")
    lines = path.read_text().splitlines()
    if not lines or not lines[0].startswith("# config_hash="):
        raise ConfigError(f"{path}: missing config_hash header line")
    found = lines[0].split("=", 1)[1]
    if found != expected_hash:
        raise ConfigError(
            f"{path}: config_hash {found[:12]}... does not match current config {expected_hash[:12]}..."
        )
    points = []
    for line in lines[2:]:
        if not line:
            continue
        t, c2, szz, sxz = line.split(",")
        points.append(
            ConcurrencePoint(
                time=float(t), c2_estimate=float(c2), shots_zz=int(szz), shots_xz=int(sxz)
            )
        )
    times = [p.time for p in points]
    dt = times[0] if len(times) < 2 else times[1] - times[0]
    return ConcurrenceSeries(dt=dt, points=tuple(points))


def cmd_simulate(cfg: ExperimentConfig) -> RunArtifacts:
    plans = build_plans(cfg)
    files = []
    for input_id in INPUT_IDS:
        series = simulate_series(
            cfg.hamiltonian, input_id, plans[input_id], cfg.seed, eta=cfg.eta, mode=cfg.mode
        )
        name = f"series_{input_id}.csv"
        _write_text(cfg.out / name, _series_csv(series, cfg.config_hash))
        files.append(name)
    _write_manifest(cfg, "simulate", files)
    for name in files:
        print(f"wrote {cfg.out / name}")
    return RunArtifacts(cfg.out, tuple(files), cfg.config_hash)


def cmd_spectrum(cfg: ExperimentConfig) -> RunArtifacts:
    files = []
    peaks: dict[str, dict] = {}
    for input_id in INPUT_IDS:
        series = _read_series_csv(cfg.out / f"series_{input_id}.csv", cfg.config_hash)
        spectrum = dft(series)
        name = f"spectrum_{input_id}.csv"
        lines = [f"# config_hash={cfg.config_hash}", "omega,magnitude"]
        for w, m in zip(spectrum.omegas, spectrum.magnitudes):
            lines.append(f"{_fmt(w)},{_fmt(m)}")
        _write_text(cfg.out / name, "\n".join(lines) + "\n")
        files.append(name)
        try:
            peak = find_peak(spectrum)
            peaks[input_id] = {
                "bin_index": peak.bin_index,
                "magnitude": peak.magnitude,
                "no_oscillation": False,
                "omega": peak.omega,
            }
        except NoOscillationError:
            peaks[input_id] = {"no_oscillation": True}
    peaks["config_hash"] = cfg.config_hash
    _write_json(cfg.out / "peaks.json", peaks)
    files.append("peaks.json")
    _write_manifest(cfg, "spectrum", files)
    for name in files:
        print(f"wrote {cfg.out / name}")
    return RunArtifacts(cfg.out, tuple(files), cfg.config_hash)


def cmd_characterize(cfg: ExperimentConfig) -> RunArtifacts:
    plans = build_plans(cfg)
    report = characterize(cfg.hamiltonian, plans, cfg.seed, eta=cfg.eta, mode=cfg.mode)
    frequencies = {}
    for i, input_id in enumerate(INPUT_IDS):
        entry = {
            "degenerate": report.degenerate[input_id],
            "sigma": report.quad.sigmas[i],
            "value": report.quad.values[i],
        }
        est = report.estimates.get(input_id)
        if est is not None:
            entry.update(
                {
                    "delta_f_over_f": est.delta_f_over_f,
                    "fallback": est.fallback,
                    "raw_peak_omega": est.raw_peak_omega,
                }
            )
        frequencies[input_id] = entry
    summary = {
        "c_hat": {
            "c1": report.result.c_hat.c1,
            "c2": report.result.c_hat.c2,
            "c3": report.result.c_hat.c3,
        },
        "candidates_considered": report.result.candidates_considered,
        "config_hash": cfg.config_hash,
        "convention": report.result.convention,
        "eta": cfg.eta,
        "frequencies": frequencies,
        "mode": cfg.mode,
        "residual": report.result.residual,
        "seed": cfg.seed,
        "sigma": {
            "c1": report.result.sigma[0],
            "c2": report.result.sigma[1],
            "c3": report.result.sigma[2],
        },
    }
    _write_json(cfg.out / "summary.json", summary)
    _write_manifest(cfg, "characterize", ["summary.json"])
    print(
        "c_hat = ({}, {}, {})".format(
            _fmt(report.result.c_hat.c1), _fmt(report.result.c_hat.c2), _fmt(report.result.c_hat.c3)
        )
    )
    print(f"wrote {cfg.out / 'summary.json'}")
    return RunArtifacts(cfg.out, ("summary.json",), cfg.config_hash)


def cmd_gate_error(args) -> RunArtifacts:
    ne_min, ne_max, ne_count = args.ne_range
    if ne_min < 1 or ne_max < ne_min or ne_count < 1:
        raise ConfigError(
            f"--ne-range: need 1 <= MIN <= MAX and COUNT >= 1, got {ne_min} {ne_max} {ne_count}"
        )
    ne_values = sorted({int(round(v)) for v in np.geomspace(ne_min, ne_max, ne_count)})
    ne_values = [ne for ne in ne_values if ne >= 1]
    if not ne_values:
        raise ConfigError("--ne-range: produced an empty budget sweep")

    out = Path(args.out if args.out is not None else "runs/gate-error")
    payload = {
        "gate": args.gate,
        "ne_values": ne_values,
        "nt": sorted(args.nt),
        "p_target": args.p_target,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    config_hash = hashlib.sha256(blob.encode()).hexdigest()

    files = []
    for nt in sorted(args.nt):
        reports = budget_curve(nt, ne_values, gate=args.gate)
        name = f"gate_error_nt{nt}.csv"
        lines = [f"# config_hash={config_hash}", "n_total,epsilon,p_eff"]
        for r in reports:
            lines.append(f"{r.total_measurements},{_fmt(r.epsilon)},{_fmt(r.p_eff)}")
        _write_text(out / name, "\n".join(lines) + "\n")
        files.append(name)

    if args.p_target is not None:
        threshold = {}
        for nt in sorted(args.nt):
            r = measurements_for_threshold(args.p_target, nt, gate=args.gate)
            threshold[str(nt)] = {
                "epsilon": r.epsilon,
                "n_total": r.total_measurements,
                "ne": r.ne,
                "p_eff": r.p_eff,
            }
            print(
                f"threshold p_eff <= {_fmt(args.p_target)} at nt={nt} ({args.gate}): "
                f"Ne = {r.ne}, N = {r.total_measurements}"
            )
        threshold["config_hash"] = config_hash
        threshold["gate"] = args.gate
        threshold["p_target"] = args.p_target
        _write_json(out / "threshold.json", threshold)
        files.append("threshold.json")

    for name in files:
        print(f"wrote {out / name}")
    return RunArtifacts(out, tuple(files), config_hash)


def _sideband_frequencies(h: HamiltonianParams) -> dict[str, float]:
    """Spectral positions 4|ci +/- cj| of the main line and the five sidebands."""
    c1, c2, c3 = h.as_tuple()
    return {
        "w1m2": 4.0 * abs(c1 - c2),
        "w1p2": 4.0 * abs(c1 + c2),
        "w1m3": 4.0 * abs(c1 - c3),
        "w1p3": 4.0 * abs(c1 + c3),
        "w2m3": 4.0 * abs(c2 - c3),
        "w2p3": 4.0 * abs(c2 + c3),
    }


def cosine_amplitudes(times: np.ndarray, values: np.ndarray, omegas: dict[str, float]) -> dict[str, float]:
    """Least-squares amplitudes of cos(omega*t) components at known positions.

    Exact for noiseless traces, immune to DFT leakage.  Frequencies that
    coincide (within rounding) share one regression column; a frequency at DC is
    indistinguishable from the constant term and reports amplitude 0.
    """
    unique: list[float] = []
    column_of: dict[str, int | None] = {}
    for label, w in omegas.items():
        if w < 1e-9:
            column_of[label] = None
            continue
        for k, u in enumerate(unique):
            if abs(w - u) < 1e-9 * max(w, u):
                column_of[label] = k
                break
        else:
            column_of[label] = len(unique)
            unique.append(w)
    design = np.column_stack([np.ones_like(times)] + [np.cos(w * times) for w in unique])
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    return {
        label: (0.0 if col is None else float(abs(coef[col + 1])))
        for label, col in column_of.items()
    }


def cmd_robustness(cfg: ExperimentConfig) -> RunArtifacts:
    """Sweep preparation error and track what it does to the first input's line.

    The swept quantity is the exact squared concurrence of the contaminated
    input as it evolves.  The single-channel estimator is blind to the
    interference between the intended and contaminant components, and the
    two-channel phase convention only holds for clean inputs, so a sampled
    trace cannot expose the spurious lines; the exact curve is what the
    first-order expansion approximates and is computed regardless of mode.
    """
    h = cfg.hamiltonian
    mags = np.abs(combinations(h))
    largest = float(mags.max())
    if largest <= 0.0:
        raise ConfigError("hamiltonian: all coupling combinations vanish; nothing to observe")
    main_w = float(mags[0])
    guess = main_w if main_w > 1e-9 * largest else largest
    plan = plan_observation(guess, cfg.robustness.nt, cfg.robustness.ne, cfg.strategy)

    sidebands = _sideband_frequencies(h)
    labels = ["w1p2", "w1m3", "w1p3", "w2m3", "w2p3"]
    files = []
    rows = []
    for eta in cfg.robustness.etas:
        psi0 = prepare_input(PrepSpec(PSI1, eta))
        points = tuple(
            ConcurrencePoint(
                time=float(t),
                c2_estimate=concurrence_sq_exact(evolve(h, psi0, float(t))),
            )
            for t in plan.times()
        )
        series = ConcurrenceSeries(dt=plan.dt, points=points)
        spectrum = dft(series)
        tag = f"eta{eta:g}"

        name = f"robustness_spectrum_{tag}.csv"
        lines = [f"# config_hash={cfg.config_hash}", "omega,magnitude"]
        for w, m in zip(spectrum.omegas, spectrum.magnitudes):
            lines.append(f"{_fmt(w)},{_fmt(m)}")
        _write_text(cfg.out / name, "\n".join(lines) + "\n")
        files.append(name)

        expansion = imperfect_prep_concurrence_sq(h, eta, series.times)
        name = f"robustness_curve_{tag}.csv"
        lines = [f"# config_hash={cfg.config_hash}", "t,c2_exact,c2_first_order"]
        for t, v, e in zip(series.times, series.values, expansion):
            lines.append(f"{_fmt(t)},{_fmt(v)},{_fmt(e)}")
        _write_text(cfg.out / name, "\n".join(lines) + "\n")
        files.append(name)

        try:
            peak_omega = find_peak(spectrum).omega
        except NoOscillationError:
            peak_omega = 0.0
        amps = cosine_amplitudes(series.times, series.values, sidebands)
        rows.append((eta, peak_omega, amps))

    name = "robustness.csv"
    header = "eta,main_peak_omega,main_amp," + ",".join(f"amp_{label}" for label in labels)
    lines = [f"# config_hash={cfg.config_hash}", header]
    for eta, peak_omega, amps in rows:
        cells = [_fmt(eta), _fmt(peak_omega), _fmt(amps["w1m2"])]
        cells += [_fmt(amps[label]) for label in labels]
        lines.append(",".join(cells))
    _write_text(cfg.out / name, "\n".join(lines) + "\n")
    files.append(name)
    _write_manifest(cfg, "robustness", files)
    for name in files:
        print(f"wrote {cfg.out / name}")
    return RunArtifacts(cfg.out, tuple(files), cfg.config_hash)


def _add_common_flags(parser: argparse.ArgumentParser, config_required: bool = True) -> None:
    parser.add_argument("--config", required=config_required, help="path to the JSON config")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--out", default=None, help="override the output directory")
    parser.add_argument(
        "--mode", choices=("sampled", "noiseless"), default=None, help="override the run mode"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entmap",
        description="Simulate and characterize anisotropic two-qubit Heisenberg couplings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for command in ("simulate", "spectrum", "characterize", "robustness"):
        p = sub.add_parser(command)
        _add_common_flags(p)

    p = sub.add_parser("gate-error")
    _add_common_flags(p, config_required=False)
    p.add_argument(
        "--nt",
        type=int,
        action="append",
        default=None,
        help="time-grid size; repeat the flag for several curves (default: 10 and 100)",
    )
    p.add_argument(
        "--ne-range",
        nargs=3,
        type=int,
        metavar=("MIN", "MAX", "COUNT"),
        default=(1, 8192, 27),
        help="log-spaced endpoint budgets",
    )
    p.add_argument("--gate", choices=GATES, default=GATE_ISING_CNOT)
    p.add_argument("--p-target", type=float, default=None, help="solve for the minimal budget")
    return parser


def _dispatch(args) -> int:
    if args.command == "gate-error":
        if args.nt is None:
            args.nt = [10, 100]
        for nt in args.nt:
            if nt < 4:
                raise ConfigError(f"--nt: must be >= 4, got {nt}")
        if args.p_target is not None and not 0.0 < args.p_target <= 1.0:
            raise ConfigError(f"--p-target: must lie in (0, 1], got {args.p_target}")
        cmd_gate_error(args)
        return EXIT_OK

    cfg = resolve_config(load_config(args.config), args)
    commands = {
        "simulate": cmd_simulate,
        "spectrum": cmd_spectrum,
        "characterize": cmd_characterize,
        "robustness": cmd_robustness,
    }
    commands[args.command](cfg)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InconsistentFrequencyError as exc:
        print(f"inconsistent frequencies: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except FileNotFoundError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
