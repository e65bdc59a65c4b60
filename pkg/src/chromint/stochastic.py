"""Monte Carlo photon event generation and coincidence analysis.

Semiclassical model: each source carries a stochastic complex field envelope
(slow phase walk for a laser, per-coherence-slot complex Gaussian for a
thermally populated mode), detectors see the interfering intensity through
the color-erasure couplings, and photon arrivals are an inhomogeneous
Poisson process on a time grid fine enough to resolve the envelope.

Randomness is drawn from named Philox counter streams keyed as
(seed, trial*8 + role) with roles: 0 source-1 field, 1 source-2 field,
2/3 detector A/B shot noise and placement, 4/5 detector A/B dark counts,
6/7 detector A/B post-hoc thinning.  Identical (config, seed, trial) input
therefore reproduces bit-identical event streams.

Timestamps are integer picoseconds; simultaneous arrivals within 1 ps
collapse to a single count (detector dead-time proxy).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox
from scipy.optimize import curve_fit
from scipy.stats import t as student_t

from .erasure import DetectorSetting
from .interferometry import InterferometerGeometry, detector_couplings

PS_PER_S = 1_000_000_000_000
_CHUNK = 1 << 20  # fixed: chunking must not alter the draw sequence
_STEPS_PER_COHERENCE = 16


def substream(seed: int, trial: int, role: int) -> Generator:
    """Philox counter stream for one (trial, role) pair under a master seed."""
    if not 0 <= role < 8:
        raise ValueError("role must be in 0..7")
    key = [np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64((trial << 3) | role)]
    return Generator(Philox(key=key))


@dataclass(frozen=True)
class ThermalFieldModel:
    """Stochastic field envelope of one source.

    mode "coherent" is a constant-intensity field whose phase random-walks
    with the configured coherence time (Lorentzian line, linewidth
    1/(pi*coherence_time)); mode "thermal" redraws an independent complex
    Gaussian amplitude each coherence slot, so slot intensities are
    exponential (Bose-Einstein counts per slot).  carrier_offset_hz shifts
    the field frequency; the offset difference of a source pair sets the
    beat rate seen in g2(tau).
    """

    mean_rate: float
    coherence_time: float
    mode: str = "coherent"
    carrier_offset_hz: float = 0.0

    def __post_init__(self):
        if self.mean_rate <= 0:
            raise ValueError("mean_rate must be positive")
        if self.coherence_time <= 0:
            raise ValueError("coherence_time must be positive")
        if self.mode not in ("coherent", "thermal"):
            raise ValueError("mode must be 'coherent' or 'thermal'")

    @property
    def linewidth(self) -> float:
        return 1.0 / (math.pi * self.coherence_time)


@dataclass(frozen=True)
class EventStream:
    """Timestamped detections of one detector over [0, duration_ps)."""

    detector_id: str
    timestamps: np.ndarray
    duration_ps: int
    rng_seed: int

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype=np.int64)
        object.__setattr__(self, "timestamps", ts)
        if ts.size:
            if ts[0] < 0 or ts[-1] >= self.duration_ps:
                raise ValueError("timestamps must lie in [0, duration_ps)")
            if np.any(np.diff(ts) <= 0):
                raise ValueError("timestamps must be strictly increasing")

    @property
    def count(self) -> int:
        return int(self.timestamps.size)


@dataclass(frozen=True)
class G2Curve:
    """Binned second-order coherence estimates over a set of offsets."""

    taus_ps: np.ndarray
    values: np.ndarray
    gate_ps: int
    n_coincidence: np.ndarray
    n_a: int
    n_b: int
    n_bin: int

    def __post_init__(self):
        object.__setattr__(self, "taus_ps", np.asarray(self.taus_ps, dtype=np.int64))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        object.__setattr__(self, "n_coincidence",
                           np.asarray(self.n_coincidence, dtype=np.int64))
        finite = self.values[np.isfinite(self.values)]
        if np.any(finite < 0):
            raise ValueError("g2 values must be nonnegative")


class _FieldState:
    """Mutable per-source envelope state carried across simulation chunks."""

    def __init__(self, source: ThermalFieldModel, dt: float, rng: Generator):
        self.source = source
        self.dt = dt
        self.rng = rng
        if source.mode == "coherent":
            self.phase = float(rng.uniform(0.0, 2.0 * math.pi))
            self.sigma = math.sqrt(dt / source.coherence_time)
        else:
            self.steps_per_slot = max(1, int(round(source.coherence_time / dt)))
            self.current_slot = -1
            self.current_value = 0.0 + 0.0j

    def _gaussian_slots(self, n: int) -> np.ndarray:
        z = self.rng.standard_normal(2 * n)
        return (z[0::2] + 1j * z[1::2]) / math.sqrt(2.0)

    def chunk(self, start_step: int, n: int) -> np.ndarray:
        src = self.source
        if src.mode == "coherent":
            incr = self.rng.normal(0.0, self.sigma, size=n)
            incr += 2.0 * math.pi * src.carrier_offset_hz * self.dt
            phases = self.phase + np.cumsum(incr)
            self.phase = float(phases[-1])
            return np.exp(1j * phases)
        slot_ids = (start_step + np.arange(n)) // self.steps_per_slot
        first, last = int(slot_ids[0]), int(slot_ids[-1])
        if self.current_slot < 0:
            values = self._gaussian_slots(last - first + 1)
            table_base = first
        else:
            fresh = self._gaussian_slots(last - self.current_slot)
            values = np.concatenate(([self.current_value], fresh))
            table_base = self.current_slot
        self.current_slot = last
        self.current_value = complex(values[-1])
        env = values[slot_ids - table_base]
        if src.carrier_offset_hz:
            t = (start_step + np.arange(n)) * self.dt
            env = env * np.exp(2j * math.pi * src.carrier_offset_hz * t)
        return env


def _time_step(sources: list[ThermalFieldModel]) -> float:
    dt = math.inf
    for s in sources:
        if s.mode == "coherent":
            dt = min(dt, s.coherence_time / _STEPS_PER_COHERENCE)
        else:
            dt = min(dt, s.coherence_time)
    offsets = [s.carrier_offset_hz for s in sources]
    beat = max(abs(o) for o in offsets) if offsets else 0.0
    if len(offsets) == 2:
        beat = max(beat, abs(offsets[0] - offsets[1]))
    if beat > 0:
        dt = min(dt, 1.0 / (16.0 * beat))
    return max(dt, 1e-12)


def simulate_events(source1: ThermalFieldModel, source2: ThermalFieldModel | None,
                    geometry: InterferometerGeometry,
                    det_a: DetectorSetting, det_b: DetectorSetting,
                    duration: float, seed: int, trial: int = 0,
                    standard_detection: bool = False,
                    defer_efficiency: bool = False
                    ) -> tuple[EventStream, EventStream]:
    """Generate one event stream per detector for the configured setup.

    The per-step detection rate of each detector is the semiclassical
    intensity of the two interfering source fields through the detector
    couplings; its interference part carries sqrt(v_deg) per detector so a
    matched pair degrades the coincidence fringe by v_deg exactly once.
    With standard_detection the conversion stage is bypassed and the two
    colors beat only if their wavelengths coincide.

    Efficiency thins the signal rate at generation unless defer_efficiency
    is set (then apply_efficiency reproduces the same thinning law
    post hoc); dark counts are appended unthinned from their own streams.
    """
    sources = [source1] + ([source2] if source2 is not None else [])
    tc_max = max(s.coherence_time for s in sources)
    if duration < 100.0 * tc_max:
        warnings.warn(f"duration {duration:g}s is under 100 coherence times; "
                      "estimates may be statistically unstable", stacklevel=2)
    dt = _time_step(sources)
    n_steps = int(math.ceil(duration / dt))
    duration_ps = int(round(duration * PS_PER_S))

    rng_f1 = substream(seed, trial, 0)
    state1 = _FieldState(source1, dt, rng_f1)
    state2 = _FieldState(source2, dt, substream(seed, trial, 1)) if source2 else None
    rng_det = [substream(seed, trial, 2), substream(seed, trial, 3)]

    w1 = source1.mean_rate / 2.0
    w2 = source2.mean_rate / 2.0 if source2 else 0.0
    same_wavelength = abs(geometry.lambda1 - geometry.lambda2) <= 1e-12 * geometry.lambda1

    det_consts = []
    for det, name in ((det_a, "A"), (det_b, "B")):
        psi1 = geometry.path_phase(1, name)
        psi2 = geometry.path_phase(2, name)
        if standard_detection:
            # no conversion stage: colors beat only when degenerate
            k1 = k2 = 1.0 + 0.0j
            mix = same_wavelength and source2 is not None
        else:
            k1, k2 = detector_couplings(det)
            mix = source2 is not None
        b1 = abs(k1) ** 2 * w1
        b2 = abs(k2) ** 2 * w2
        cross_coeff = 0.0
        if mix:
            cross_coeff = (math.sqrt(det.visibility_degradation)
                           * k1 * np.conj(k2) * math.sqrt(w1 * w2)
                           * np.exp(1j * (psi1 - psi2)))
        det_consts.append((b1, b2, cross_coeff,
                           1.0 if defer_efficiency else det.efficiency))

    times = [[], []]
    for start in range(0, n_steps, _CHUNK):
        n = min(_CHUNK, n_steps - start)
        e1 = state1.chunk(start, n)
        i1 = np.abs(e1) ** 2
        if state2 is not None:
            e2 = state2.chunk(start, n)
            i2 = np.abs(e2) ** 2
            beat = e1 * np.conj(e2)
        else:
            i2 = 0.0
            beat = None
        for d, (b1, b2, cross_coeff, eff) in enumerate(det_consts):
            rate = b1 * i1 + b2 * i2
            if beat is not None and cross_coeff != 0.0:
                rate = rate + 2.0 * np.real(cross_coeff * beat)
            mu = np.clip(rate, 0.0, None) * (dt * eff)
            counts = rng_det[d].poisson(mu)
            total = int(counts.sum())
            if total:
                steps_idx = np.repeat(np.arange(n, dtype=np.float64), counts)
                offs = rng_det[d].uniform(size=total)
                t_s = (start + steps_idx + offs) * dt
                times[d].append(np.floor(t_s * PS_PER_S).astype(np.int64))

    streams = []
    for d, (det, name) in enumerate(((det_a, "A"), (det_b, "B"))):
        ts = np.concatenate(times[d]) if times[d] else np.empty(0, dtype=np.int64)
        rng_dark = substream(seed, trial, 4 + d)
        n_dark = int(rng_dark.poisson(det.dark_count_rate * duration))
        if n_dark:
            dark_ts = np.floor(rng_dark.uniform(0.0, duration, size=n_dark)
                               * PS_PER_S).astype(np.int64)
            ts = np.concatenate([ts, dark_ts])
        ts = np.unique(ts)
        ts = ts[(ts >= 0) & (ts < duration_ps)]
        streams.append(EventStream(name, ts, duration_ps, seed))
    return streams[0], streams[1]


def apply_efficiency(stream: EventStream, efficiency: float, seed: int,
                     trial: int = 0) -> EventStream:
    """Post-hoc thinning: keep each event independently with prob efficiency.

    Uses the same seed-derived thinning substream role (6 for detector A,
    7 for B) so a deferred-efficiency simulation plus this call is the
    documented counterpart of thinning at generation.
    """
    if not 0.0 <= efficiency <= 1.0:
        raise ValueError("efficiency must lie in [0, 1]")
    role = 6 if stream.detector_id == "A" else 7
    rng = substream(seed, trial, role)
    keep = rng.uniform(size=stream.count) < efficiency
    return EventStream(stream.detector_id, stream.timestamps[keep],
                       stream.duration_ps, stream.rng_seed)


# ---------------------------------------------------------------------------
# Coincidence counting.

@dataclass(frozen=True)
class CoincidencePartial:
    """Mergeable per-segment coincidence bookkeeping.

    Holds the occupied-bin index sets and raw counts of a gate-aligned time
    segment; merging partials (union of occupied bins, sums of counts) and
    then finalizing yields exactly the single-pass G2Curve, so the reduction
    is associative and commutative.
    """

    occupied_a: np.ndarray
    occupied_b: np.ndarray
    n_a: int
    n_b: int
    n_bin: int
    gate_ps: int

    @classmethod
    def from_streams(cls, stream_a: EventStream, stream_b: EventStream,
                     gate_ps: int, start_ps: int = 0,
                     stop_ps: int | None = None) -> "CoincidencePartial":
        if gate_ps <= 0:
            raise ValueError("gate must be positive")
        if stream_a.duration_ps != stream_b.duration_ps:
            raise ValueError("streams must cover equal durations")
        if stop_ps is None:
            stop_ps = stream_a.duration_ps
        if start_ps % gate_ps or (stop_ps % gate_ps and stop_ps != stream_a.duration_ps):
            raise ValueError("segment boundaries must be gate-aligned")
        sl_a = stream_a.timestamps[(stream_a.timestamps >= start_ps)
                                   & (stream_a.timestamps < stop_ps)]
        sl_b = stream_b.timestamps[(stream_b.timestamps >= start_ps)
                                   & (stream_b.timestamps < stop_ps)]
        n_bin = -(-(stop_ps - start_ps) // gate_ps)
        return cls(np.unique(sl_a // gate_ps), np.unique(sl_b // gate_ps),
                   int(sl_a.size), int(sl_b.size), int(n_bin), gate_ps)

    def merge(self, other: "CoincidencePartial") -> "CoincidencePartial":
        if self.gate_ps != other.gate_ps:
            raise ValueError("cannot merge partials with different gates")
        return CoincidencePartial(np.union1d(self.occupied_a, other.occupied_a),
                                  np.union1d(self.occupied_b, other.occupied_b),
                                  self.n_a + other.n_a, self.n_b + other.n_b,
                                  self.n_bin + other.n_bin, self.gate_ps)

    def to_curve(self, taus_ps) -> G2Curve:
        taus = np.asarray(taus_ps, dtype=np.int64)
        ncoinc = np.zeros(taus.size, dtype=np.int64)
        for i, tau in enumerate(taus):
            offset = int(round(tau / self.gate_ps))
            ncoinc[i] = np.intersect1d(self.occupied_a, self.occupied_b - offset,
                                       assume_unique=True).size
        denom = self.n_a * self.n_b
        if denom > 0:
            values = ncoinc * (self.n_bin / denom)
        else:
            values = np.full(taus.size, np.nan)
        return G2Curve(taus, values, self.gate_ps, ncoinc,
                       self.n_a, self.n_b, self.n_bin)


def estimate_g2(stream_a: EventStream, stream_b: EventStream,
                taus_ps, gate_ps: int) -> G2Curve:
    """Binned coincidence estimate g2(tau) = n_coinc * n_bin / (n_A * n_B).

    Both streams are binned at the gate width; a coincidence at offset tau
    is a pair of occupied bins separated by round(tau/gate) bins.  Empty
    streams yield NaN values with the counts preserved.
    """
    return CoincidencePartial.from_streams(stream_a, stream_b, gate_ps).to_curve(taus_ps)


# ---------------------------------------------------------------------------
# Fringe fitting and spectra.

def fit_fringe(xs: np.ndarray, values: np.ndarray, period: float
               ) -> tuple[float, float, float]:
    """Least-squares sinusoid with known period: offset, amplitude, phase."""
    xs = np.asarray(xs, dtype=float)
    values = np.asarray(values, dtype=float)
    ang = 2.0 * math.pi * xs / period
    design = np.column_stack([np.ones_like(ang), np.cos(ang), np.sin(ang)])
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    offset, a, b = coef
    return float(offset), float(math.hypot(a, b)), float(math.atan2(-b, a))


def fitted_visibility(xs: np.ndarray, values: np.ndarray, period: float) -> float:
    """(max-min)/(max+min) of the fitted sinusoid, i.e. amplitude/offset."""
    offset, amplitude, _ = fit_fringe(xs, values, period)
    if offset <= 0:
        return 0.0
    return amplitude / offset


def fit_fringe_free_period(xs: np.ndarray, values: np.ndarray
                           ) -> tuple[float, float, float, float]:
    """Sinusoid fit with the period free: (offset, amplitude, period, phase).

    A free-period cosine fit is multimodal, so the period is seeded from the
    discrete Fourier peak of the mean-subtracted curve (uniform grid
    required) and then refined by least squares.
    """
    xs = np.asarray(xs, dtype=float)
    values = np.asarray(values, dtype=float)
    steps = np.diff(xs)
    if np.max(np.abs(steps - steps[0])) > 1e-9 * abs(steps[0]):
        raise ValueError("free-period fit needs a uniform grid")
    spec = np.abs(np.fft.rfft(values - values.mean()))
    freqs = np.fft.rfftfreq(xs.size, d=steps[0])
    k = 1 + int(np.argmax(spec[1:]))
    period0 = 1.0 / freqs[k]

    def model(x, off, amp, period, phi):
        return off + amp * np.cos(2.0 * math.pi * x / period + phi)

    p0 = (float(values.mean()), float(values.std() * math.sqrt(2.0)), period0, 0.0)
    popt, _ = curve_fit(model, xs, values, p0=p0, maxfev=20000)
    off, amp, period, phi = popt
    if amp < 0:
        amp, phi = -amp, phi + math.pi
    return float(off), float(amp), float(abs(period)), float(phi)


def fringe_fft(delays_m: np.ndarray, values: np.ndarray
               ) -> tuple[np.ndarray, np.ndarray, float]:
    """Fourier magnitude of a mean-subtracted delay scan.

    Delays convert to light travel time (d/c), so the returned axis and peak
    are optical frequencies in Hz.  Requires a uniform grid of at least 16
    points; the peak search excludes the DC bin.
    """
    from .interferometry import SPEED_OF_LIGHT

    delays_m = np.asarray(delays_m, dtype=float)
    values = np.asarray(values, dtype=float)
    if delays_m.size < 16:
        raise ValueError("need at least 16 scan points")
    steps = np.diff(delays_m)
    if np.max(np.abs(steps - steps[0])) > 1e-9 * abs(steps[0]):
        raise ValueError("delay grid must be uniform")
    dt_s = steps[0] / SPEED_OF_LIGHT
    spectrum = np.abs(np.fft.rfft(values - values.mean()))
    freqs = np.fft.rfftfreq(delays_m.size, d=dt_s)
    peak_idx = 1 + int(np.argmax(spectrum[1:]))
    return freqs, spectrum, float(freqs[peak_idx])


def fit_g2_envelope(taus_s: np.ndarray, values: np.ndarray, beat_hz: float
                    ) -> tuple[float, float, float]:
    """Fit g2(tau) = 1 + a*exp(-tau/t)*cos(2*pi*f*tau + phi) at known f.

    Returns (amplitude, decay_time, phase).  The decay time estimates the
    mutual coherence time of the source pair.
    """
    taus_s = np.asarray(taus_s, dtype=float)
    values = np.asarray(values, dtype=float)
    ok = np.isfinite(values)
    taus_s, values = taus_s[ok], values[ok]

    def model(tau, a, t_dec, phi):
        return 1.0 + a * np.exp(-tau / t_dec) * np.cos(2.0 * math.pi * beat_hz * tau + phi)

    span = taus_s.max() - taus_s.min() if taus_s.size else 1.0
    p0 = (max(values.max() - 1.0, 0.1), span / 3.0, 0.0)
    popt, _ = curve_fit(model, taus_s, values, p0=p0,
                        bounds=([0.0, span * 1e-3, -math.pi],
                                [2.0, span * 1e3, math.pi]), maxfev=20000)
    return float(popt[0]), float(popt[1]), float(popt[2])


# ---------------------------------------------------------------------------
# Composite studies.

def g2_vs_tau_scan(source1: ThermalFieldModel, source2: ThermalFieldModel | None,
                   geometry: InterferometerGeometry, det_a: DetectorSetting,
                   det_b: DetectorSetting, duration: float, taus_ps,
                   gate_ps: int, seed: int, trial: int = 0,
                   standard_detection: bool = False) -> G2Curve:
    """Simulate one long run and estimate g2 over a grid of offsets.

    The oscillation rate in tau is the carrier beat of the source pair and
    the sign of the correlation at tau = 0 follows the detector pump-phase
    difference; the envelope decays on the mutual coherence time.
    """
    a, b = simulate_events(source1, source2, geometry, det_a, det_b,
                           duration, seed, trial,
                           standard_detection=standard_detection)
    return estimate_g2(a, b, taus_ps, gate_ps)


def delay_scan_events(source1: ThermalFieldModel, source2: ThermalFieldModel,
                      geometry: InterferometerGeometry, det_a: DetectorSetting,
                      det_b: DetectorSetting, delays_m: np.ndarray,
                      duration: float, gate_ps: int, seed: int,
                      standard_detection: bool = False, tau_ps: int = 0,
                      trial_base: int = 0) -> np.ndarray:
    """Monte Carlo g2(tau) versus arm-B optical delay, one run per delay."""
    out = np.zeros(len(delays_m))
    for i, d in enumerate(np.asarray(delays_m, dtype=float)):
        geo = geometry.with_delay(geometry.delay_b + d)
        a, b = simulate_events(source1, source2, geo, det_a, det_b, duration,
                               seed, trial=trial_base + i,
                               standard_detection=standard_detection)
        out[i] = estimate_g2(a, b, [tau_ps], gate_ps).values[0]
    return out


def gate_time_study(source1: ThermalFieldModel, source2: ThermalFieldModel,
                    geometry: InterferometerGeometry, det_a: DetectorSetting,
                    det_b: DetectorSetting, delays_m: np.ndarray,
                    duration: float, gates_ps: list[int], period_m: float,
                    seed: int, n_trials: int = 4) -> list[dict]:
    """Fringe visibility versus coincidence gate width.

    Each trial simulates one event-stream pair per delay and re-bins the
    same streams at every gate, so gate-to-gate differences carry no extra
    shot noise.  Returns one row per gate with the trial mean visibility
    and a 95% confidence half-width.
    """
    vis = np.zeros((len(gates_ps), n_trials))
    for trial in range(n_trials):
        curves = {g: [] for g in gates_ps}
        for i, d in enumerate(np.asarray(delays_m, dtype=float)):
            geo = geometry.with_delay(geometry.delay_b + d)
            a, b = simulate_events(source1, source2, geo, det_a, det_b,
                                   duration, seed,
                                   trial=trial * len(delays_m) + i)
            for g in gates_ps:
                curves[g].append(estimate_g2(a, b, [0], g).values[0])
        for gi, g in enumerate(gates_ps):
            vis[gi, trial] = fitted_visibility(np.asarray(delays_m),
                                               np.asarray(curves[g]), period_m)
    rows = []
    tcrit = student_t.ppf(0.975, n_trials - 1) if n_trials > 1 else 0.0
    for gi, g in enumerate(gates_ps):
        mean = float(vis[gi].mean())
        half = float(tcrit * vis[gi].std(ddof=1) / math.sqrt(n_trials)) \
            if n_trials > 1 else 0.0
        rows.append({"gate_ps": g, "visibility": mean, "ci95": half,
                     "trials": vis[gi].tolist()})
    return rows


# ---------------------------------------------------------------------------
# Text formats.

def write_event_csv(path, *streams: EventStream) -> None:
    """Event file: detector_id,timestamp_ps rows sorted by timestamp."""
    rows = []
    for s in streams:
        rows.extend((int(t), s.detector_id) for t in s.timestamps)
    rows.sort()
    with open(path, "w") as fh:
        fh.write("detector_id,timestamp_ps\n")
        for t, det in rows:
            fh.write(f"{det},{t}\n")


def read_event_csv(path, duration_ps: int | None = None, seed: int = 0
                   ) -> dict[str, EventStream]:
    by_det: dict[str, list[int]] = {}
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "detector_id,timestamp_ps":
            raise ValueError(f"unexpected event file header: {header!r}")
        for line in fh:
            det, t = line.strip().split(",")
            by_det.setdefault(det, []).append(int(t))
    if duration_ps is None:
        duration_ps = 1 + max((max(v) for v in by_det.values() if v), default=0)
    return {det: EventStream(det, np.array(sorted(v), dtype=np.int64),
                             duration_ps, seed)
            for det, v in by_det.items()}


def write_g2_csv(path, curve: G2Curve) -> None:
    """G2 curve file: tau_ps,g2,n_coincidence,n_A,n_B,n_bin."""
    with open(path, "w") as fh:
        fh.write("tau_ps,g2,n_coincidence,n_A,n_B,n_bin\n")
        for tau, val, nc in zip(curve.taus_ps, curve.values, curve.n_coincidence):
            val_s = f"{val:.12g}" if np.isfinite(val) else "nan"
            fh.write(f"{tau},{val_s},{nc},{curve.n_a},{curve.n_b},{curve.n_bin}\n")
