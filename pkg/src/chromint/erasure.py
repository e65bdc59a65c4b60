"""Color-erasure detector model: post-selection, indistinguishability and
the effective two-mode color rotation.

A detector converts between the two signal colors with mixing angle
theta = chi*T*sqrt(N) and pump phase phi, filters one output color, and in
the strong-pump limit acts on the signal color qubit as the unitary

    [[cos(theta), -exp(-i*phi)*sin(theta)],
     [exp(i*phi)*sin(theta),  cos(theta)]]

over the basis {|1>_1 |0>_2, |0>_1 |1>_2}.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fock import (
    EPS_NORM,
    CoherentSpec,
    FockBasis,
    SectorError,
    TripleModeState,
    default_pump_cutoff,
    evolve_closed_form,
    inner_product,
)

# Post-selection branches below this probability are treated as empty.
EMPTY_BRANCH_PROB = 1e-15


@dataclass(frozen=True)
class DetectorSetting:
    """Operating point of one color-erasure detector.

    theta is the conversion angle chi*T*sqrt(N); output_filter selects which
    color is detected (1 or 2); visibility_degradation is a scalar standing
    in for multimode noise and multiplies interference terms downstream,
    never the constant terms.
    """

    theta: float
    pump_phase: float = 0.0
    output_filter: int = 2
    efficiency: float = 1.0
    dark_count_rate: float = 0.0
    visibility_degradation: float = 1.0

    def __post_init__(self):
        if self.output_filter not in (1, 2):
            raise ValueError("output_filter must be 1 or 2")
        if not 0.0 <= self.efficiency <= 1.0:
            raise ValueError("efficiency must lie in [0, 1]")
        if not 0.0 <= self.visibility_degradation <= 1.0:
            raise ValueError("visibility_degradation must lie in [0, 1]")
        if self.dark_count_rate < 0.0:
            raise ValueError("dark_count_rate must be nonnegative")


@dataclass(frozen=True)
class ColorQubitState:
    """Signal color qubit (a, b) over {|1,0>, |0,1>} with |a|^2+|b|^2 = 1."""

    a: complex
    b: complex

    def __post_init__(self):
        n = abs(self.a) ** 2 + abs(self.b) ** 2
        if abs(n - 1.0) > 1e3 * EPS_NORM:
            raise ValueError(f"color qubit norm {n} deviates from 1")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=complex)


@dataclass(frozen=True)
class PostSelection:
    """Result of filtering a state on one output color.

    state is None when the branch is empty (probability below
    EMPTY_BRANCH_PROB); probability is always the raw projection weight.
    """

    state: TripleModeState | None
    probability: float

    @property
    def empty(self) -> bool:
        return self.state is None


def post_select(state: TripleModeState, output_filter: int) -> PostSelection:
    """Project onto exactly one photon in the chosen signal mode, renormalize.

    Implements the projector 1 (x) |1><1|_filter (x) 1; the complementary
    occupations of the filtered mode are discarded.  Never divides by zero:
    a branch with probability below EMPTY_BRANCH_PROB is returned empty.
    """
    if output_filter not in (1, 2):
        raise ValueError("output_filter must be 1 or 2")
    occ = state.basis.occupations()[:, output_filter - 1]
    mask = occ == 1
    kept = np.where(mask, state.amplitudes, 0.0)
    prob = float(np.sum(np.abs(kept) ** 2))
    if prob < EMPTY_BRANCH_PROB:
        return PostSelection(None, prob)
    out = TripleModeState(state.basis, kept / np.sqrt(prob),
                          label=f"{state.label}|filter{output_filter}")
    return PostSelection(out, prob)


def erasure_overlap(mean_photons: float, theta: float, phase: float = 0.0,
                    basis: FockBasis | None = None) -> float:
    """|<Psi~1|Psi~2>| computed exactly on the truncated space.

    Builds the two evolved single-photon states for the same pump, filters
    both on color 2 and takes the inner-product modulus.  The overlap against
    an empty branch is defined as 0.
    """
    if mean_photons <= 0:
        raise ValueError("mean photon number must be positive")
    if basis is None:
        basis = FockBasis(1, 1, default_pump_cutoff(mean_photons))
    pump = CoherentSpec(mean_photons, phase)
    chi_t = theta / np.sqrt(mean_photons)
    sel1 = post_select(evolve_closed_form(1, pump, chi_t, basis), 2)
    sel2 = post_select(evolve_closed_form(2, pump, chi_t, basis), 2)
    if sel1.empty or sel2.empty:
        return 0.0
    return abs(inner_product(sel1.state, sel2.state))


def reduced_signal_density(state: TripleModeState) -> np.ndarray:
    """Trace out the pump mode, returning the 2x2 signal color density matrix.

    Requires the state to carry exactly one signal photon; basis order is
    {|1,0>, |0,1>}.  The result is Hermitian, unit trace and PSD.
    """
    occ = state.basis.occupations()
    n_signal = occ[:, 0] + occ[:, 1]
    weight_outside = float(np.sum(np.abs(state.amplitudes[n_signal != 1]) ** 2))
    if weight_outside > 1e3 * EPS_NORM:
        raise SectorError(
            f"state has probability {weight_outside:.3e} outside the "
            "single-signal-photon sector")
    b = state.basis
    n3 = b.n3_max + 1
    psi = np.zeros((2, n3), dtype=complex)
    for m in range(n3):
        psi[0, m] = state.amplitudes[b.index(1, 0, m)]
        psi[1, m] = state.amplitudes[b.index(0, 1, m)]
    rho = psi @ psi.conj().T
    rho /= np.trace(rho).real
    return rho


def effective_rotation(theta: float, phase: float = 0.0) -> np.ndarray:
    """Strong-pump color rotation on the signal qubit.

    Columns applied to (1,0) and (0,1) give the asymptotic post-conversion
    states of an incoming color-1 and color-2 photon respectively.
    """
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -np.exp(-1j * phase) * s],
                     [np.exp(1j * phase) * s, c]], dtype=complex)


def rotation_output(input_mode: int, theta: float, phase: float = 0.0) -> ColorQubitState:
    """Asymptotic color-qubit state for a single input photon."""
    col = effective_rotation(theta, phase)[:, input_mode - 1]
    return ColorQubitState(col[0], col[1])


def pure_state_fidelity(rho: np.ndarray, qubit: ColorQubitState) -> float:
    """Uhlmann fidelity against a pure state: F = <phi|rho|phi>."""
    v = qubit.vector
    return float(np.real(np.conj(v) @ rho @ v))


def evolved_signal_density(input_mode: int, mean_photons: float, theta: float,
                           phase: float = 0.0,
                           basis: FockBasis | None = None) -> np.ndarray:
    """Reduced signal density matrix of the exactly evolved state."""
    if basis is None:
        basis = FockBasis(1, 1, default_pump_cutoff(mean_photons))
    pump = CoherentSpec(mean_photons, phase)
    chi_t = theta / np.sqrt(mean_photons)
    return reduced_signal_density(evolve_closed_form(input_mode, pump, chi_t, basis))


def save_density(rho: np.ndarray, path: str | Path) -> None:
    """Serialize a 2x2 density matrix: header, then row-major i,j,re,im lines."""
    if rho.shape != (2, 2):
        raise ValueError("expected a 2x2 density matrix")
    lines = ["2,2"]
    for i in range(2):
        for j in range(2):
            lines.append(f"{i},{j},{rho[i, j].real:.17g},{rho[i, j].imag:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_density(path: str | Path) -> np.ndarray:
    text = Path(path).read_text().strip().splitlines()
    if text[0].strip() != "2,2":
        raise ValueError("unsupported density matrix header")
    rho = np.zeros((2, 2), dtype=complex)
    for line in text[1:]:
        i, j, re_s, im_s = line.split(",")
        rho[int(i), int(j)] = float(re_s) + 1j * float(im_s)
    return rho
