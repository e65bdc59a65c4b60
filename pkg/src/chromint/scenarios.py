"""Config-driven scenario runner.

Each scenario reproduces one of the interferometry figures as data files in
an output directory, together with a manifest recording the resolved
configuration, its hash, library versions, the seed and wall time.  Configs
are YAML key-value files; wavelengths are given in nm, times in ps, rates
in counts/s and lengths in m, converted once here at the boundary.

Default parameter values follow the published operating tables of the
tabletop experiment (laser and thermal source cases); purely hardware
figures such as pump powers and waveguide temperatures ride along as
metadata and feed no physics.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .erasure import DetectorSetting, erasure_overlap
from .interferometry import (
    SPEED_OF_LIGHT,
    InterferometerGeometry,
    delay_scan,
    separation_scan,
    write_scan_csv,
)
from .stochastic import (
    ThermalFieldModel,
    fit_fringe_free_period,
    delay_scan_events,
    estimate_g2,
    fit_g2_envelope,
    fitted_visibility,
    fringe_fft,
    g2_vs_tau_scan,
    gate_time_study,
    simulate_events,
    write_g2_csv,
)

SCENARIOS = (
    "laser_delay_scan", "laser_fft", "laser_g2_tau",
    "thermal_delay_scan", "thermal_fft", "thermal_g2_tau",
    "free_space_hbt", "free_space_same_wavelength",
    "gate_time_study", "erasure_overlap_scan",
)


class ConfigError(ValueError):
    """Configuration cannot be parsed or validated."""


@dataclass
class ScenarioConfig:
    """Resolved parameters of one run; every field has a scenario default."""

    scenario: str
    seed: int = 12345
    # wavelengths (nm)
    lambda1_nm: float = 1549.800
    lambda2_nm: float = 863.344
    lambda3_nm: float = 1949.157
    # sources
    source_kind: str = "coherent"
    source_rate_hz: float = 4.0e7
    coherence_time_ps: float = 318_000.0
    detuning_hz: float = 0.0
    # detectors
    theta: float = math.pi / 4.0
    pump_phase_a: float = 0.0
    pump_phase_b: float = 0.0
    output_filter: int = 1
    efficiency: float = 0.195
    splitter_efficiency: float = 0.55
    dark_count_rate_hz: float = 0.0
    v_deg: float = 1.0
    pump_on: bool = True
    # geometry
    base_path_m: float = 0.05
    # scan grids
    delay_points: int = 24
    delay_span_periods: float = 2.0
    duration_ps: float = 1.0e11
    gate_ps: int = 1000
    tau_max_ps: int = 300_000
    tau_step_ps: int = 4_000
    gates_ps: list = field(default_factory=lambda: [100, 1000, 200000])
    gate_trials: int = 4
    # free space (Fig. 4 arrangement)
    source_separation_m: float = 125e-6
    screen_distance_m: float = 0.40
    separation_min_m: float = 0.2e-3
    separation_max_m: float = 14.4e-3
    separation_points: int = 36
    # erasure overlap scan
    overlap_mean_photons: list = field(default_factory=lambda: [4, 8, 16, 32, 64, 128])
    overlap_theta: float = math.pi / 4.0
    overlap_phase: float = 0.0
    # hardware metadata, not modeled physics
    metadata: dict = field(default_factory=dict)

    @property
    def lambda3_m(self) -> float | None:
        return None if self.lambda3_nm <= 0 else self.lambda3_nm * 1e-9

    @property
    def duration_s(self) -> float:
        return self.duration_ps * 1e-12


_LASER_METADATA = {
    "ucspd_efficiency": 0.195,
    "waveguide_temp_a_celsius": 36.4,
    "waveguide_temp_b_celsius": 52.9,
    "pump_power_mw": 152.6,
}
_THERMAL_METADATA = {
    "si_apd_efficiency": 0.55,
    "ucspd_efficiency": 0.195,
    "waveguide_temp_a_celsius": 37.4,
    "waveguide_temp_b_celsius": 34.9,
    "pump_power_mw": 192.3,
    "filter_bandwidth_hz": 50e6,
}
_THERMAL_BASE = {
    "lambda1_nm": 1549.968,
    "lambda2_nm": 863.396,
    "source_kind": "thermal",
    "source_rate_hz": 2.0e7,
    # 50 MHz etalon: coherence time = 1/(pi * bandwidth)
    "coherence_time_ps": 6366.0,
    "gate_ps": 500,
    "metadata": _THERMAL_METADATA,
}

SCENARIO_DEFAULTS: dict[str, dict] = {
    "laser_delay_scan": {"metadata": _LASER_METADATA},
    "laser_fft": {"delay_points": 40, "delay_span_periods": 10.0,
                  "duration_ps": 2.5e10, "metadata": _LASER_METADATA},
    "laser_g2_tau": {"coherence_time_ps": 106_103.0, "detuning_hz": 25e6,
                     "duration_ps": 3.0e11, "metadata": _LASER_METADATA},
    "thermal_delay_scan": dict(_THERMAL_BASE, duration_ps=1.0e11),
    "thermal_fft": dict(_THERMAL_BASE, delay_points=40, delay_span_periods=10.0,
                        duration_ps=4.0e10),
    "thermal_g2_tau": dict(_THERMAL_BASE, detuning_hz=100e6, duration_ps=5.0e10,
                           tau_max_ps=25_000, tau_step_ps=1_000, gate_ps=500),
    "free_space_hbt": {"duration_ps": 5.0e10, "source_rate_hz": 4.0e7},
    "free_space_same_wavelength": {
        "lambda2_nm": 1549.800, "lambda3_nm": -1.0, "pump_on": False,
        "duration_ps": 5.0e10, "separation_min_m": 0.2e-3,
        "separation_max_m": 15.2e-3, "separation_points": 36},
    "gate_time_study": dict(_THERMAL_BASE, coherence_time_ps=20_000.0,
                            duration_ps=2.5e11, delay_points=10,
                            delay_span_periods=1.5, source_rate_hz=2.0e7),
    "erasure_overlap_scan": {},
}


def default_config(scenario: str) -> ScenarioConfig:
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}; valid: {', '.join(SCENARIOS)}")
    return ScenarioConfig(scenario=scenario, **SCENARIO_DEFAULTS[scenario])


def config_from_mapping(data: dict) -> ScenarioConfig:
    if not isinstance(data, dict) or "scenario" not in data:
        raise ConfigError("config must be a mapping with a 'scenario' key")
    scenario = data["scenario"]
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}; valid: {', '.join(SCENARIOS)}")
    known = {f.name for f in dataclasses.fields(ScenarioConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    merged = dict(SCENARIO_DEFAULTS[scenario])
    merged.update({k: v for k, v in data.items() if k != "scenario"})
    cfg = ScenarioConfig(scenario=scenario, **merged)
    validate_config(cfg)
    return cfg


def load_config(path: str | Path) -> ScenarioConfig:
    try:
        data = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_mapping(data)


def serialize_config(cfg: ScenarioConfig) -> str:
    """Canonical YAML of the fully resolved config (round-trip idempotent)."""
    return yaml.safe_dump(dataclasses.asdict(cfg), sort_keys=True)


def config_hash(cfg: ScenarioConfig) -> str:
    return hashlib.sha256(serialize_config(cfg).encode()).hexdigest()


def apply_overrides(cfg: ScenarioConfig, overrides: list[str]) -> ScenarioConfig:
    """Apply key=value strings, coercing to the field's default type."""
    data = dataclasses.asdict(cfg)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, _, raw = item.partition("=")
        if key not in data or key == "metadata":
            raise ConfigError(f"unknown override key {key!r}")
        current = data[key]
        try:
            if isinstance(current, bool):
                data[key] = raw.lower() in ("1", "true", "yes", "on")
            elif isinstance(current, int):
                data[key] = int(float(raw))
            elif isinstance(current, float):
                data[key] = float(raw)
            elif isinstance(current, list):
                data[key] = [type(current[0])(float(x)) if current else float(x)
                             for x in raw.split(",")]
            else:
                data[key] = raw
        except ValueError as exc:
            raise ConfigError(f"cannot parse override {item!r}: {exc}") from exc
    return config_from_mapping(data)


def validate_config(cfg: ScenarioConfig) -> None:
    if cfg.source_kind not in ("coherent", "thermal"):
        raise ConfigError(f"unknown source_kind {cfg.source_kind!r}")
    for name in ("source_rate_hz", "coherence_time_ps", "duration_ps", "gate_ps"):
        if getattr(cfg, name) <= 0:
            raise ConfigError(f"{name} must be positive")
    if not 0.0 <= cfg.efficiency <= 1.0:
        raise ConfigError("efficiency must lie in [0, 1]")
    if not 0.0 <= cfg.v_deg <= 1.0:
        raise ConfigError("v_deg must lie in [0, 1]")
    if cfg.output_filter not in (1, 2):
        raise ConfigError("output_filter must be 1 or 2")
    if cfg.delay_points < 4:
        raise ConfigError("delay_points must be at least 4")
    # the geometry constructor enforces the pump wavelength constraint
    try:
        make_geometry(cfg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Builders.

def make_geometry(cfg: ScenarioConfig) -> InterferometerGeometry:
    ell = cfg.base_path_m
    return InterferometerGeometry(cfg.lambda1_nm * 1e-9, cfg.lambda2_nm * 1e-9,
                                  cfg.lambda3_m, ell, ell, ell, ell)


def make_sources(cfg: ScenarioConfig) -> tuple[ThermalFieldModel, ThermalFieldModel]:
    tc = cfg.coherence_time_ps * 1e-12
    s1 = ThermalFieldModel(cfg.source_rate_hz, tc, cfg.source_kind, 0.0)
    s2 = ThermalFieldModel(cfg.source_rate_hz, tc, cfg.source_kind, cfg.detuning_hz)
    return s1, s2


def make_detectors(cfg: ScenarioConfig) -> tuple[DetectorSetting, DetectorSetting]:
    theta = cfg.theta if cfg.pump_on else 0.0
    common = dict(output_filter=cfg.output_filter, efficiency=cfg.efficiency,
                  dark_count_rate=cfg.dark_count_rate_hz,
                  visibility_degradation=cfg.v_deg)
    return (DetectorSetting(theta, cfg.pump_phase_a, **common),
            DetectorSetting(theta, cfg.pump_phase_b, **common))


def _delays(cfg: ScenarioConfig) -> np.ndarray:
    lam3 = cfg.lambda3_m
    if lam3 is None:
        raise ConfigError("delay scans require a pump wavelength")
    return np.linspace(0.0, cfg.delay_span_periods * lam3, cfg.delay_points,
                       endpoint=False)


def _write_mc_curve(path: Path, x_name: str, xs, values, extra: dict | None = None):
    cols = [x_name, "g2"]
    extra = extra or {}
    cols += list(extra)
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for i, (x, v) in enumerate(zip(xs, values)):
            row = [f"{x:.12g}", f"{v:.12g}"]
            row += [f"{extra[c][i]:.12g}" for c in extra]
            fh.write(",".join(row) + "\n")


# ---------------------------------------------------------------------------
# Scenario implementations.  Each returns a dict of result metrics; emitted
# file names are collected by the caller.

def _run_delay_scan(cfg: ScenarioConfig, out: Path) -> dict:
    geometry = make_geometry(cfg)
    s1, s2 = make_sources(cfg)
    det_a, det_b = make_detectors(cfg)
    delays = _delays(cfg)
    analytic = delay_scan(geometry, delays, cfg.source_kind, det_a, det_b)
    write_scan_csv(out / "delay_scan_analytic.csv", delays, analytic)
    g2 = delay_scan_events(s1, s2, geometry, det_a, det_b, delays,
                           cfg.duration_s, cfg.gate_ps, cfg.seed,
                           standard_detection=not cfg.pump_on)
    _write_mc_curve(out / "delay_scan_mc.csv", "delay_m", delays, g2)
    vis = fitted_visibility(delays, g2, cfg.lambda3_m)
    base = analytic[0].constant_term
    amp = max(abs(r.interference_term) for r in analytic)
    return {"fitted_visibility": vis, "mean_g2": float(np.mean(g2)),
            "analytic_visibility": amp / base if base else 0.0}


def _run_fft(cfg: ScenarioConfig, out: Path) -> dict:
    geometry = make_geometry(cfg)
    s1, s2 = make_sources(cfg)
    det_a, det_b = make_detectors(cfg)
    delays = _delays(cfg)
    g2 = delay_scan_events(s1, s2, geometry, det_a, det_b, delays,
                           cfg.duration_s, cfg.gate_ps, cfg.seed,
                           standard_detection=not cfg.pump_on)
    _write_mc_curve(out / "delay_scan_mc.csv", "delay_m", delays, g2)
    freqs, spectrum, peak = fringe_fft(delays, g2)
    with open(out / "spectrum.csv", "w") as fh:
        fh.write("frequency_hz,magnitude\n")
        for f, m in zip(freqs, spectrum):
            fh.write(f"{f:.12g},{m:.12g}\n")
    median = float(np.median(spectrum[1:]))
    peak_mag = float(np.max(spectrum[1:]))
    expected = SPEED_OF_LIGHT / cfg.lambda3_m if cfg.lambda3_m else float("nan")
    return {"peak_frequency_hz": peak, "expected_frequency_hz": expected,
            "peak_to_median": peak_mag / median if median > 0 else float("inf"),
            "frequency_bin_hz": float(freqs[1] - freqs[0])}


def _run_g2_tau(cfg: ScenarioConfig, out: Path) -> dict:
    geometry = make_geometry(cfg)
    s1, s2 = make_sources(cfg)
    det_a, det_b = make_detectors(cfg)
    taus = np.arange(0, cfg.tau_max_ps + 1, cfg.tau_step_ps, dtype=np.int64)
    curve = g2_vs_tau_scan(s1, s2, geometry, det_a, det_b, cfg.duration_s,
                           taus, cfg.gate_ps, cfg.seed,
                           standard_detection=not cfg.pump_on)
    write_g2_csv(out / "g2_tau.csv", curve)
    result: dict = {"n_a": curve.n_a, "n_b": curve.n_b,
                    "g2_zero": float(curve.values[0])}
    if cfg.detuning_hz > 0 and cfg.pump_on and cfg.source_kind == "coherent":
        # exponential envelope fit; slot-model thermal sources decay with a
        # triangular correlation instead, so the fit applies to lasers only
        amp, decay_s, _ = fit_g2_envelope(curve.taus_ps * 1e-12, curve.values,
                                          cfg.detuning_hz)
        result.update({"envelope_amplitude": amp,
                       "envelope_decay_ps": decay_s * 1e12,
                       "configured_coherence_ps": cfg.coherence_time_ps})
    if cfg.source_kind == "thermal":
        # source characterization: one thermal beam on a balanced splitter
        splitter_det = DetectorSetting(0.0, efficiency=cfg.splitter_efficiency)
        a, b = simulate_events(make_sources(cfg)[0], None, geometry,
                               splitter_det, splitter_det, cfg.duration_s,
                               cfg.seed, trial=len(taus) + 1,
                               standard_detection=True)
        sp_taus = np.arange(0, 10 * int(cfg.coherence_time_ps) + 1,
                            cfg.gate_ps, dtype=np.int64)
        sp = estimate_g2(a, b, sp_taus, cfg.gate_ps)
        write_g2_csv(out / "splitter_g2.csv", sp)
        result["splitter_g2_zero"] = float(sp.values[0])
    return result


def _run_free_space(cfg: ScenarioConfig, out: Path) -> dict:
    s1, s2 = make_sources(cfg)
    det_a, det_b = make_detectors(cfg)
    xs = np.linspace(cfg.separation_min_m, cfg.separation_max_m,
                     cfg.separation_points)
    analytic = separation_scan(xs, cfg.source_separation_m, cfg.screen_distance_m,
                               cfg.lambda1_nm * 1e-9, cfg.lambda2_nm * 1e-9,
                               cfg.lambda3_m, cfg.source_kind, det_a, det_b)
    write_scan_csv(out / "fringe_analytic.csv", xs, analytic, x_name="separation_m")
    g2 = np.zeros(xs.size)
    for i, x in enumerate(xs):
        geo = InterferometerGeometry.from_free_space(
            cfg.source_separation_m, cfg.screen_distance_m, x,
            cfg.lambda1_nm * 1e-9, cfg.lambda2_nm * 1e-9, cfg.lambda3_m)
        a, b = simulate_events(s1, s2, geo, det_a, det_b, cfg.duration_s,
                               cfg.seed, trial=i,
                               standard_detection=not cfg.pump_on)
        g2[i] = estimate_g2(a, b, [0], cfg.gate_ps).values[0]
    _write_mc_curve(out / "fringe_mc.csv", "separation_m", xs, g2)
    period = analytic_fringe_period(cfg)
    _, amp, fitted_period, _ = fit_fringe_free_period(xs, g2)
    vis = fitted_visibility(xs, g2, period) if period else 0.0
    return {"analytic_period_m": period, "fitted_period_m": fitted_period,
            "fitted_visibility": vis}


def analytic_fringe_period(cfg: ScenarioConfig) -> float:
    """Local fringe period in detector separation at the scan center."""
    from .interferometry import fringe_phase
    x0 = 0.5 * (cfg.separation_min_m + cfg.separation_max_m)
    dx = 1e-6

    def phase(x):
        geo = InterferometerGeometry.from_free_space(
            cfg.source_separation_m, cfg.screen_distance_m, x,
            cfg.lambda1_nm * 1e-9, cfg.lambda2_nm * 1e-9, cfg.lambda3_m)
        return fringe_phase(geo)

    slope = (phase(x0 + dx) - phase(x0 - dx)) / (2 * dx)
    return abs(2.0 * math.pi / slope) if slope else 0.0


def _run_gate_time(cfg: ScenarioConfig, out: Path) -> dict:
    geometry = make_geometry(cfg)
    s1, s2 = make_sources(cfg)
    det_a, det_b = make_detectors(cfg)
    delays = _delays(cfg)
    rows = gate_time_study(s1, s2, geometry, det_a, det_b, delays,
                           cfg.duration_s, [int(g) for g in cfg.gates_ps],
                           cfg.lambda3_m, cfg.seed, n_trials=cfg.gate_trials)
    with open(out / "gate_time.csv", "w") as fh:
        fh.write("gate_ps,visibility,ci95_halfwidth\n")
        for r in rows:
            fh.write(f"{r['gate_ps']},{r['visibility']:.12g},{r['ci95']:.12g}\n")
    return {"rows": rows}


def _run_overlap_scan(cfg: ScenarioConfig, out: Path) -> dict:
    rows = []
    for n in cfg.overlap_mean_photons:
        ov = erasure_overlap(float(n), cfg.overlap_theta, cfg.overlap_phase)
        rows.append((float(n), ov, 1.0 - ov))
    with open(out / "overlap.csv", "w") as fh:
        fh.write("mean_photons,overlap,deficit\n")
        for n, ov, d in rows:
            fh.write(f"{n:.12g},{ov:.12g},{d:.12g}\n")
    return {"deficits": {f"{n:g}": d for n, _, d in rows}}


_RUNNERS = {
    "laser_delay_scan": _run_delay_scan,
    "thermal_delay_scan": _run_delay_scan,
    "laser_fft": _run_fft,
    "thermal_fft": _run_fft,
    "laser_g2_tau": _run_g2_tau,
    "thermal_g2_tau": _run_g2_tau,
    "free_space_hbt": _run_free_space,
    "free_space_same_wavelength": _run_free_space,
    "gate_time_study": _run_gate_time,
    "erasure_overlap_scan": _run_overlap_scan,
}


def run_scenario(cfg: ScenarioConfig, out_dir: str | Path) -> dict:
    """Run one scenario into out_dir; returns the written manifest."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"output directory {out} is not writable: {exc}") from exc
    started = time.time()
    results = _RUNNERS[cfg.scenario](cfg, out)
    elapsed = time.time() - started
    (out / "config.yaml").write_text(serialize_config(cfg))
    data_files = sorted(p.name for p in out.iterdir()
                        if p.suffix == ".csv")
    manifest = {
        "scenario": cfg.scenario,
        "seed": cfg.seed,
        "config_sha256": config_hash(cfg),
        "versions": {"chromint": __version__, "numpy": np.__version__},
        "wall_time_s": round(elapsed, 3),
        "data_files": {name: hashlib.sha256((out / name).read_bytes()).hexdigest()
                       for name in data_files},
        "results": results,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return manifest
