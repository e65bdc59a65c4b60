"""Closed-form chromatic intensity interferometry.

Propagation amplitudes from geometry, coincidence probabilities for
single-photon, coherent-superposition and incoherent-mixture sources,
source-phase averaging, and analytic fringe-scan generation.

Source 1 emits at wavelength lambda1 (long), source 2 at lambda2 (short);
the pump wavelength lambda3 satisfies 1/lambda3 = 1/lambda2 - 1/lambda1.
An optical delay applied to arm B adds to both path lengths into detector B,
so scanning it advances the fringe at the pump frequency c/lambda3.

Everything here is a pure function of its arguments; scan generators stay
deterministic and order-preserving, so scan points parallelize trivially.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .erasure import DetectorSetting

SPEED_OF_LIGHT = 299792458.0  # m/s

WAVELENGTH_REL_TOL = 1e-6


@dataclass(frozen=True)
class InterferometerGeometry:
    """Two sources, two detectors, explicit path lengths in meters.

    lambda3 may be None for the degenerate same-wavelength (standard HBT)
    arrangement; when given it must satisfy the energy-conservation
    constraint against lambda1 and lambda2.
    """

    lambda1: float
    lambda2: float
    lambda3: float | None
    l_1a: float
    l_1b: float
    l_2a: float
    l_2b: float
    delay_b: float = 0.0

    def __post_init__(self):
        if self.lambda1 <= 0 or self.lambda2 <= 0:
            raise ValueError("wavelengths must be positive")
        for name in ("l_1a", "l_1b", "l_2a", "l_2b"):
            if getattr(self, name) < 0:
                raise ValueError(f"path length {name} must be nonnegative")
        if self.lambda3 is not None:
            if self.lambda3 <= 0:
                raise ValueError("pump wavelength must be positive")
            inv3 = 1.0 / self.lambda2 - 1.0 / self.lambda1
            if inv3 <= 0:
                raise ValueError("lambda2 must be shorter than lambda1 for a real pump")
            rel = abs(inv3 - 1.0 / self.lambda3) * self.lambda3
            if rel > WAVELENGTH_REL_TOL:
                raise ValueError(
                    f"1/lambda3 = 1/lambda2 - 1/lambda1 violated by relative error "
                    f"{rel:.3e} (> {WAVELENGTH_REL_TOL:.0e})")

    @classmethod
    def from_free_space(cls, source_separation: float, screen_distance: float,
                        detector_separation: float, lambda1: float, lambda2: float,
                        lambda3: float | None, delay_b: float = 0.0
                        ) -> "InterferometerGeometry":
        """Planar geometry: sources at (+-s/2, 0), detectors at (+-x/2, R).

        The detector separation is applied symmetrically about the optical
        axis, which keeps the fringe strictly periodic in x; paths are exact
        Euclidean distances.  Source 1 sits at -s/2 and detector A at -x/2.
        """
        if screen_distance <= 0:
            raise ValueError("screen distance must be positive")
        s, x, r = source_separation, detector_separation, screen_distance

        def dist(xs, xd):
            return math.hypot(r, xd - xs)

        return cls(lambda1, lambda2, lambda3,
                   l_1a=dist(-s / 2, -x / 2), l_1b=dist(-s / 2, +x / 2),
                   l_2a=dist(+s / 2, -x / 2), l_2b=dist(+s / 2, +x / 2),
                   delay_b=delay_b)

    def with_delay(self, delay_b: float) -> "InterferometerGeometry":
        return InterferometerGeometry(self.lambda1, self.lambda2, self.lambda3,
                                      self.l_1a, self.l_1b, self.l_2a, self.l_2b,
                                      delay_b=delay_b)

    def effective_length(self, source: int, detector: str) -> float:
        """Optical path from a source (1 or 2) to a detector ('A' or 'B').

        The arm-B delay is added to both wavelengths equally (fiber-delay
        picture)."""
        key = {(1, "A"): self.l_1a, (1, "B"): self.l_1b,
               (2, "A"): self.l_2a, (2, "B"): self.l_2b}[(source, detector)]
        return key + (self.delay_b if detector == "B" else 0.0)

    def path_phase(self, source: int, detector: str) -> float:
        """Propagation phase 2*pi*L/lambda reduced modulo 2*pi.

        Macroscopic paths span ~1e5 wavelengths, so the unreduced phase
        would round at the 1e-10 rad level and sums of such phases would
        lose the interference identities; reducing L/lambda modulo one
        cycle first keeps every downstream phase combination consistent to
        machine precision."""
        lam = self.lambda1 if source == 1 else self.lambda2
        cycles = self.effective_length(source, detector) / lam
        return 2.0 * math.pi * math.fmod(cycles, 1.0)


@dataclass(frozen=True)
class SourceModel:
    """Photon source description.

    kind selects the statistics: "single_photon", "coherent_superposition"
    (amplitudes c0, c1, c2) or "incoherent_mixture" (probabilities p0, p1,
    p2).  emission_phase is a fixed angle in radians or the string "ergodic"
    for a phase uniform on [0, 2*pi).
    """

    kind: str
    wavelength: float
    coefficients: tuple = (0.0, 1.0, 0.0)
    emission_phase: float | str = "ergodic"
    coherence_time: float = 1e-6

    def __post_init__(self):
        if self.kind not in ("single_photon", "coherent_superposition",
                             "incoherent_mixture"):
            raise ValueError(f"unknown source kind {self.kind!r}")
        if self.coherence_time <= 0:
            raise ValueError("coherence_time must be positive")
        if self.kind == "coherent_superposition":
            total = sum(abs(c) ** 2 for c in self.coefficients)
        elif self.kind == "incoherent_mixture":
            if any(p < 0 for p in self.coefficients):
                raise ValueError("mixture probabilities must be nonnegative")
            total = sum(self.coefficients)
        else:
            total = 1.0
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"source coefficients normalize to {total}, expected 1")


@dataclass(frozen=True)
class PropagationAmplitudes:
    """The four single-photon amplitudes D_1A, D_1B, D_2A, D_2B."""

    d_1a: complex
    d_1b: complex
    d_2a: complex
    d_2b: complex

    def with_source_phases(self, theta1: float, theta2: float) -> "PropagationAmplitudes":
        e1, e2 = cmath.exp(1j * theta1), cmath.exp(1j * theta2)
        return PropagationAmplitudes(self.d_1a * e1, self.d_1b * e1,
                                     self.d_2a * e2, self.d_2b * e2)


@dataclass(frozen=True)
class CoincidenceResult:
    """probability = constant_term + interference_term, with an optional
    per-term breakdown for the superposition formula."""

    probability: float
    constant_term: float
    interference_term: float
    terms: tuple = field(default=())

    def __post_init__(self):
        if self.probability < -1e-12:
            raise ValueError(f"negative probability {self.probability}")


def amplitudes(geometry: InterferometerGeometry, theta1: float = 0.0,
               theta2: float = 0.0) -> PropagationAmplitudes:
    """D = (1/sqrt2) * exp(i*2*pi*L/lambda + i*theta_source) for each pair."""
    amp = 1.0 / math.sqrt(2.0)

    def one(source, det, th):
        return amp * cmath.exp(1j * (geometry.path_phase(source, det) + th))

    return PropagationAmplitudes(one(1, "A", theta1), one(1, "B", theta1),
                                 one(2, "A", theta2), one(2, "B", theta2))


def fringe_phase(geometry: InterferometerGeometry) -> float:
    """2*pi*(L1A/l1 + L2B/l2 - L1B/l1 - L2A/l2), source phases cancel."""
    return (geometry.path_phase(1, "A") + geometry.path_phase(2, "B")
            - geometry.path_phase(1, "B") - geometry.path_phase(2, "A"))


def coincidence_single_photon(amps: PropagationAmplitudes,
                              theta: float) -> CoincidenceResult:
    """Both-detectors-fire probability for one photon from each source.

    Both detectors share the conversion angle theta and filter color 2:
    probability = cos^2(theta) sin^2(theta) |D1A D2B + D1B D2A|^2.
    """
    w = (math.cos(theta) * math.sin(theta)) ** 2
    cross = amps.d_1a * amps.d_2b
    swap = amps.d_1b * amps.d_2a
    constant = w * (abs(cross) ** 2 + abs(swap) ** 2)
    interference = w * 2.0 * (cross * swap.conjugate()).real
    return CoincidenceResult(constant + interference, constant, interference)


def coincidence_superposition(amps: PropagationAmplitudes, theta: float,
                              phase: float, c: tuple, d: tuple) -> CoincidenceResult:
    """Coincidence probability for number-superposition sources, truncated
    at two photons per source.

    The six terms of the displayed expansion are returned separately
    (attribute .terms) in the order: single-single, pair-from-1,
    pair-from-2, and the three cross terms.  Only the cross terms and the
    swap part of the first term depend on the emission phases.
    """
    if len(c) != 3 or len(d) != 3:
        raise ValueError("coefficient vectors must have three entries (n = 0, 1, 2)")
    ct, st = math.cos(theta), math.sin(theta)
    cross = amps.d_1a * amps.d_2b
    swap = amps.d_1b * amps.d_2a
    pair1 = amps.d_1a * amps.d_1b
    pair2 = amps.d_2a * amps.d_2b
    c0, c1, c2 = (complex(x) for x in c)
    d0, d1, d2 = (complex(x) for x in d)
    e_phi = cmath.exp(1j * phase)

    t_single = abs(c1) ** 2 * abs(d1) ** 2 * ct ** 2 * st ** 2 * abs(cross + swap) ** 2
    t_pair1 = abs(c2) ** 2 * abs(d0) ** 2 * st ** 4 * abs(pair1) ** 2
    t_pair2 = abs(c0) ** 2 * abs(d2) ** 2 * ct ** 4 * abs(pair2) ** 2
    t_cross_a = 2.0 * ct * st ** 3 * (c1 * d1 * c2.conjugate() * d0.conjugate()
                                      / e_phi * (cross + swap)
                                      * pair1.conjugate()).real
    t_cross_b = 2.0 * ct ** 3 * st * (c1 * d1 * c0.conjugate() * d2.conjugate()
                                      * e_phi * (cross + swap)
                                      * pair2.conjugate()).real
    t_cross_c = 2.0 * ct ** 2 * st ** 2 * (c2 * d0 * c0.conjugate() * d2.conjugate()
                                           * e_phi ** 2 * pair1
                                           * pair2.conjugate()).real
    terms = (t_single, t_pair1, t_pair2, t_cross_a, t_cross_b, t_cross_c)

    single_const = (abs(c1) ** 2 * abs(d1) ** 2 * ct ** 2 * st ** 2
                    * (abs(cross) ** 2 + abs(swap) ** 2))
    interference = (t_single - single_const) + t_cross_a + t_cross_b + t_cross_c
    constant = single_const + t_pair1 + t_pair2
    return CoincidenceResult(sum(terms), constant, interference, terms)


def time_average_superposition(base: PropagationAmplitudes, theta: float,
                               phase: float, c: tuple, d: tuple,
                               grid_size: int) -> CoincidenceResult:
    """Average the superposition coincidence over emission phases.

    theta1 and theta2 run over a uniform grid_size x grid_size grid on
    [0, 2*pi); the phase-dependent terms are trigonometric polynomials of
    harmonic order at most two, so any grid_size >= 3 kills them exactly.
    grid sizes below 4 are rejected per contract.
    """
    if grid_size < 4:
        raise ValueError("grid_size must be at least 4")
    phis = 2.0 * math.pi * np.arange(grid_size) / grid_size
    acc_p = acc_c = acc_i = 0.0
    acc_t = np.zeros(6)
    for t1 in phis:
        for t2 in phis:
            res = coincidence_superposition(base.with_source_phases(t1, t2),
                                            theta, phase, c, d)
            acc_p += res.probability
            acc_c += res.constant_term
            acc_i += res.interference_term
            acc_t += np.array(res.terms)
    n = grid_size ** 2
    return CoincidenceResult(acc_p / n, acc_c / n, acc_i / n,
                             tuple(acc_t / n))


def coincidence_thermal(amps: PropagationAmplitudes, theta: float,
                        p: tuple, q: tuple) -> CoincidenceResult:
    """Coincidence probability for incoherent number mixtures (two lines).

    probability = p1 q1 cos^2 sin^2 |D1A D2B + D1B D2A|^2
                + p2 q0 sin^4 |D1A D1B|^2 + p0 q2 cos^4 |D2A D2B|^2;
    the swap interference inside the first term is the only phase-sensitive
    piece.
    """
    if len(p) != 3 or len(q) != 3:
        raise ValueError("probability vectors must have three entries (n = 0, 1, 2)")
    ct, st = math.cos(theta), math.sin(theta)
    cross = amps.d_1a * amps.d_2b
    swap = amps.d_1b * amps.d_2a
    t1 = p[1] * q[1] * ct ** 2 * st ** 2 * abs(cross + swap) ** 2
    t2 = p[2] * q[0] * st ** 4 * abs(amps.d_1a * amps.d_1b) ** 2
    t3 = p[0] * q[2] * ct ** 4 * abs(amps.d_2a * amps.d_2b) ** 2
    interference = (p[1] * q[1] * ct ** 2 * st ** 2
                    * 2.0 * (cross * swap.conjugate()).real)
    constant = t1 + t2 + t3 - interference
    return CoincidenceResult(t1 + t2 + t3, constant, interference, (t1, t2, t3))


# ---------------------------------------------------------------------------
# Semiclassical pair-detection law and analytic delay scans.

def detector_couplings(det: DetectorSetting) -> tuple[complex, complex]:
    """Amplitude couplings (source-1 light, source-2 light) into the
    detected output color of one erasure detector."""
    c, s = math.cos(det.theta), math.sin(det.theta)
    if det.output_filter == 2:
        return cmath.exp(1j * det.pump_phase) * s, complex(c)
    return complex(c), -cmath.exp(-1j * det.pump_phase) * s


def pair_fringe_law(det_a: DetectorSetting, det_b: DetectorSetting,
                    source_kind: str, weight1: float = 0.5, weight2: float = 0.5
                    ) -> tuple[float, float, float]:
    """Normalized coincidence law g2 = baseline + amplitude*cos(Delta + offset).

    Returns (baseline, amplitude, offset) for the given detector pair and
    source statistics; Delta is the geometric fringe phase.  weight1/weight2
    are the relative mean photon fluxes of the two sources at each detector.
    The visibility-degradation factors enter the interference amplitude once
    per detector as sqrt(v_deg), so a matched pair scales the fringe by
    v_deg, never the baseline.
    """
    k1a, k2a = detector_couplings(det_a)
    k1b, k2b = detector_couplings(det_b)
    s_a = abs(k1a) ** 2 * weight1 + abs(k2a) ** 2 * weight2
    s_b = abs(k1b) ** 2 * weight1 + abs(k2b) ** 2 * weight2
    if s_a <= 0 or s_b <= 0:
        raise ValueError("detector sees no light; check couplings and weights")
    v_pair = math.sqrt(det_a.visibility_degradation * det_b.visibility_degradation)
    offset = (cmath.phase(k1a) - cmath.phase(k2a)
              - cmath.phase(k1b) + cmath.phase(k2b))
    cross = abs(k1a * k2a * k1b * k2b) * weight1 * weight2
    if source_kind in ("coherent", "coherent_superposition"):
        amp = v_pair * 2.0 * cross / (s_a * s_b)
        return 1.0, amp, offset
    if source_kind in ("thermal", "incoherent_mixture"):
        pedestal = (abs(k1a * k1b) ** 2 * weight1 ** 2
                    + abs(k2a * k2b) ** 2 * weight2 ** 2) / (s_a * s_b)
        amp = v_pair * 2.0 * cross / (s_a * s_b)
        return 1.0 + pedestal, amp, offset
    if source_kind == "single_photon":
        x = abs(k1a * k2b)
        y = abs(k2a * k1b)
        if x == 0.0 and y == 0.0:
            return 1.0, 0.0, offset
        amp = v_pair * 2.0 * x * y / (x ** 2 + y ** 2)
        return 1.0, amp, offset
    raise ValueError(f"unknown source kind {source_kind!r}")


def delay_scan(geometry: InterferometerGeometry, delays: np.ndarray,
               source_kind: str, det_a: DetectorSetting, det_b: DetectorSetting,
               weight1: float = 0.5, weight2: float = 0.5) -> list[CoincidenceResult]:
    """Analytic normalized coincidence versus arm-B optical delay.

    For balanced coherent sources and matched pi/4 detectors the emitted
    curve is 1 + 0.5*v_deg*cos(2*pi*d/lambda3 + const).
    """
    base, amp, offset = pair_fringe_law(det_a, det_b, source_kind, weight1, weight2)
    out = []
    for d in np.asarray(delays, dtype=float):
        delta = fringe_phase(geometry.with_delay(geometry.delay_b + d))
        osc = amp * math.cos(delta + offset)
        out.append(CoincidenceResult(base + osc, base, osc))
    return out


def separation_scan(separations: np.ndarray, source_separation: float,
                    screen_distance: float, lambda1: float, lambda2: float,
                    lambda3: float | None, source_kind: str,
                    det_a: DetectorSetting, det_b: DetectorSetting
                    ) -> list[CoincidenceResult]:
    """Analytic fringe versus symmetric detector separation (free space)."""
    base, amp, offset = pair_fringe_law(det_a, det_b, source_kind)
    out = []
    for x in np.asarray(separations, dtype=float):
        geo = InterferometerGeometry.from_free_space(
            source_separation, screen_distance, x, lambda1, lambda2, lambda3)
        osc = amp * math.cos(fringe_phase(geo) + offset)
        out.append(CoincidenceResult(base + osc, base, osc))
    return out


def write_scan_csv(path, xs: np.ndarray, results: list[CoincidenceResult],
                   x_name: str = "delay_m") -> None:
    """Scan CSV: x, probability, constant_term, interference_term at 12
    significant digits."""
    lines = [f"{x_name},probability,constant_term,interference_term"]
    for x, r in zip(xs, results):
        lines.append(f"{x:.12g},{r.probability:.12g},{r.constant_term:.12g},"
                     f"{r.interference_term:.12g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
