"""Built-in consistency checks behind the `selftest` CLI command.

The fast level runs analytic identities in a few seconds; the full level
adds the Fock-space oracle equivalences and short statistical runs.  Each
check prints one PASS/FAIL line; any failure makes the suite fail.
"""

from __future__ import annotations

import math
import time

import numpy as np

from .erasure import DetectorSetting, effective_rotation, erasure_overlap
from .fock import (
    CoherentSpec,
    FockBasis,
    TrilinearHamiltonian,
    default_pump_cutoff,
    evolve_brute_force,
    evolve_closed_form,
    single_photon_with_pump,
)
from .interferometry import (
    InterferometerGeometry,
    SPEED_OF_LIGHT,
    amplitudes,
    coincidence_single_photon,
    coincidence_superposition,
    coincidence_thermal,
    fringe_phase,
    time_average_superposition,
)
from .stochastic import (
    EventStream,
    ThermalFieldModel,
    estimate_g2,
    fringe_fft,
    simulate_events,
    substream,
)

LASER_GEOMETRY = InterferometerGeometry(1549.800e-9, 863.344e-9, 1949.157e-9,
                                        0.05, 0.05, 0.05, 0.05)


def _random_geometry(rng) -> InterferometerGeometry:
    paths = rng.uniform(0.01, 0.2, size=4)
    return InterferometerGeometry(1549.800e-9, 863.344e-9, 1949.157e-9,
                                  *paths)


def check_rotation_unitarity() -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        theta, phi = rng.uniform(0, 2 * math.pi, size=2)
        u = effective_rotation(theta, phi)
        worst = max(worst, float(np.max(np.abs(u @ u.conj().T - np.eye(2)))))
    return worst < 1e-14, f"max |U U^dag - 1| = {worst:.2e}"


def check_fringe_identity() -> tuple[bool, str]:
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(1000):
        geo = _random_geometry(rng)
        res = coincidence_single_photon(amplitudes(geo), math.pi / 4)
        ref = 0.125 * (1.0 + math.cos(fringe_phase(geo)))
        worst = max(worst, abs(res.probability - ref))
    return worst < 1e-12, f"max |P - (1/8)(1+cos)| = {worst:.2e}"


def check_superposition_reduction() -> tuple[bool, str]:
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(100):
        geo = _random_geometry(rng)
        theta = rng.uniform(0.1, 1.4)
        amps = amplitudes(geo, rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi))
        full = coincidence_superposition(amps, theta, 0.3, (0, 1, 0), (0, 1, 0))
        single = coincidence_single_photon(amps, theta)
        worst = max(worst, abs(full.probability - single.probability))
    return worst < 1e-12, f"max reduction mismatch = {worst:.2e}"


def check_phase_average() -> tuple[bool, str]:
    rng = np.random.default_rng(17)
    worst_cross = 0.0
    worst_match = 0.0
    for _ in range(20):
        geo = _random_geometry(rng)
        amps = amplitudes(geo)
        theta = rng.uniform(0.2, 1.3)
        c = rng.normal(size=3) + 1j * rng.normal(size=3)
        d = rng.normal(size=3) + 1j * rng.normal(size=3)
        c /= np.linalg.norm(c)
        d /= np.linalg.norm(d)
        avg = time_average_superposition(amps, theta, 0.7, tuple(c), tuple(d), 16)
        worst_cross = max(worst_cross, max(abs(t) for t in avg.terms[3:]))
        therm = coincidence_thermal(amps, theta, tuple(abs(x) ** 2 for x in c),
                                    tuple(abs(x) ** 2 for x in d))
        worst_match = max(worst_match, abs(avg.probability - therm.probability))
    ok = worst_cross < 1e-10 and worst_match < 1e-3
    return ok, f"cross residual {worst_cross:.2e}, thermal match {worst_match:.2e}"


def check_fft_peak() -> tuple[bool, str]:
    lam3 = 1949.157e-9
    delays = np.linspace(0, 10 * lam3, 64, endpoint=False)
    values = 1.0 + 0.5 * np.cos(2 * math.pi * delays / lam3)
    freqs, _, peak = fringe_fft(delays, values)
    bin_hz = freqs[1] - freqs[0]
    target = SPEED_OF_LIGHT / lam3
    return abs(peak - target) <= bin_hz, \
        f"peak {peak / 1e12:.2f} THz vs {target / 1e12:.2f} THz (bin {bin_hz / 1e12:.2f})"


def check_oracle_equivalence() -> tuple[bool, str]:
    worst = 0.0
    for n_mean in (1.0, 4.0, 16.0, 64.0):
        basis = FockBasis(1, 1, default_pump_cutoff(n_mean))
        ham = TrilinearHamiltonian(basis)
        pump = CoherentSpec(n_mean, 0.3)
        for theta in (math.pi / 8, math.pi / 4, math.pi / 2):
            chi_t = theta / math.sqrt(n_mean)
            for mode in (1, 2):
                closed = evolve_closed_form(mode, pump, chi_t, basis)
                start = single_photon_with_pump(mode, pump, basis)
                brute = evolve_brute_force(start, ham, chi_t)
                worst = max(worst, float(np.max(np.abs(closed.amplitudes
                                                       - brute.amplitudes))))
    return worst <= 1e-10, f"max amplitude mismatch = {worst:.2e}"


def check_overlap_scaling() -> tuple[bool, str]:
    """The indistinguishability deficit is bounded by O(1/sqrt(N)) and the
    overlap grows monotonically, exceeding 0.99 well before N = 1000 (the
    exact truncated computation runs the whole range; no asymptotic series
    is needed)."""
    ns = (4.0, 16.0, 64.0, 1000.0)
    overlaps = [erasure_overlap(n, math.pi / 4) for n in ns]
    deficits = [1.0 - ov for ov in overlaps]
    bounded = all(d * math.sqrt(n) < 1.0 for n, d in zip(ns, deficits))
    monotone = all(a < b for a, b in zip(overlaps, overlaps[1:]))
    ok = bounded and monotone and overlaps[-1] > 0.99
    return ok, ("deficit*sqrt(N) = "
                + ", ".join(f"{d * math.sqrt(n):.3f}" for n, d in zip(ns, deficits)))


def check_poisson_independence() -> tuple[bool, str]:
    # low occupancy (0.02 counts per gate) keeps the occupied-bin estimator
    # in its unbiased regime
    rng = substream(2024, 0, 0)
    duration_ps = 5_000_000_000
    streams = []
    for det in ("A", "B"):
        ts = np.unique(rng.integers(0, duration_ps, size=100_000).astype(np.int64))
        streams.append(EventStream(det, ts, duration_ps, 2024))
    curve = estimate_g2(streams[0], streams[1], [0, 5000, 40_000], 1000)
    worst = 0.0
    for val, nc in zip(curve.values, curve.n_coincidence):
        bound = 5.0 / math.sqrt(max(int(nc), 1))
        worst = max(worst, abs(val - 1.0) / bound)
    return worst < 1.0, f"max |g2-1|/(5/sqrt(nc)) = {worst:.3f}"


def check_thermal_g2() -> tuple[bool, str]:
    source = ThermalFieldModel(2e7, 6.366e-9, "thermal")
    det = DetectorSetting(0.0, efficiency=0.55)
    a, b = simulate_events(source, None, LASER_GEOMETRY, det, det, 0.02, 99,
                           standard_detection=True)
    g2 = estimate_g2(a, b, [0], 500).values[0]
    return abs(g2 - 2.0) < 0.15, f"splitter g2(0) = {g2:.3f}"


def check_laser_visibility() -> tuple[bool, str]:
    from .stochastic import delay_scan_events, fitted_visibility

    lam3 = 1949.157e-9
    delays = np.linspace(0, 1.5 * lam3, 9, endpoint=False)
    s1 = ThermalFieldModel(4e7, 318e-9, "coherent")
    s2 = ThermalFieldModel(4e7, 318e-9, "coherent")
    det = DetectorSetting(math.pi / 4, efficiency=0.5)
    g2 = delay_scan_events(s1, s2, LASER_GEOMETRY, det, det, delays, 0.03,
                           1000, 515)
    vis = fitted_visibility(delays, g2, lam3)
    return abs(vis - 0.5) < 0.06, f"fitted visibility = {vis:.3f}"


FAST_CHECKS = [
    ("rotation-unitarity", check_rotation_unitarity),
    ("fringe-identity", check_fringe_identity),
    ("superposition-reduction", check_superposition_reduction),
    ("phase-average", check_phase_average),
    ("fft-peak", check_fft_peak),
]

FULL_CHECKS = FAST_CHECKS + [
    ("fock-oracle-equivalence", check_oracle_equivalence),
    ("overlap-scaling", check_overlap_scaling),
    ("poisson-independence", check_poisson_independence),
    ("thermal-splitter-g2", check_thermal_g2),
    ("laser-visibility", check_laser_visibility),
]


def run_selftest(full: bool = False) -> bool:
    checks = FULL_CHECKS if full else FAST_CHECKS
    all_ok = True
    for name, fn in checks:
        started = time.time()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok &= ok
        status = "PASS" if ok else "FAIL"
        print(f"{status} {name:28s} {detail}  [{time.time() - started:.1f}s]")
    return all_ok
