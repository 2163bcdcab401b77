"""Observable post-processing: correlators, spectra, entropies, lifetimes.

All entropies are in nats.  Stroboscopic signals are indexed by the drive
period ``n = 0 .. n_max``; spectra use the plain DFT normalized by the
sample count, so a perfectly alternating unit signal carries amplitude 1
at ``omega / omega_0 = 1/2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import circuit_unitary
from .lattice import DisorderRealization, Lattice
from .linalg import check_density_matrix, hermitian_eigensystem
from .statevector import StateVector, partial_trace

LN2 = math.log(2.0)


@dataclass
class Signal:
    operator: str
    values: np.ndarray  # index = period n
    realization: int | None = None

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)


@dataclass
class Spectrum:
    operator: str
    omega_ratios: np.ndarray  # in units of the drive frequency
    amplitudes: np.ndarray

    def subharmonic_amplitude(self) -> float:
        """Amplitude at omega / omega_0 = 1/2 (requires an even sample count)."""
        idx = np.nonzero(np.isclose(self.omega_ratios, 0.5))[0]
        if len(idx) == 0:
            raise ValueError(
                "omega/omega_0 = 1/2 is off-grid; use an even number of samples"
            )
        return float(self.amplitudes[idx[0]])


@dataclass
class TeeResult:
    """Region entropies and their topological combination, in nats."""

    s_a: float
    s_b: float
    s_c: float
    s_ab: float
    s_ac: float
    s_bc: float
    s_abc: float
    s_topo: float
    expected: float = -LN2

    def region_entropies(self) -> dict[str, float]:
        return {
            "A": self.s_a, "B": self.s_b, "C": self.s_c,
            "AB": self.s_ab, "AC": self.s_ac, "BC": self.s_bc,
            "ABC": self.s_abc,
        }


@dataclass
class LifetimeFit:
    sizes: np.ndarray
    tau_star: np.ndarray
    censored: np.ndarray
    slope: float
    intercept: float


def autocorrelator(s0: int, values: np.ndarray, d: int) -> np.ndarray:
    """Sign-corrected geometric-mean correlator ``sign(s0 v) |v|^{1/d}``."""
    if s0 not in (-1, 1):
        raise ValueError("s0 must be -1 or +1")
    if d <= 0:
        raise ValueError("string weight d must be positive")
    v = np.asarray(values, dtype=float)
    return np.sign(s0 * v) * np.abs(v) ** (1.0 / d)


def fourier_spectrum(signal: Signal | np.ndarray, operator: str = "") -> Spectrum:
    """|DFT| / M over frequencies ``k / M`` in units of the drive frequency."""
    if isinstance(signal, Signal):
        values = signal.values
        operator = operator or signal.operator
    else:
        values = np.asarray(signal, dtype=float)
    m = len(values)
    if m < 2:
        raise ValueError("need at least two samples")
    amps = np.abs(np.fft.fft(values)) / m
    ratios = np.arange(m) / m
    return Spectrum(operator, ratios, amps)


def von_neumann_entropy(rho: np.ndarray, tol: float = 1e-10) -> float:
    """``-tr rho ln rho`` in nats; eigenvalues below 1e-12 are dropped."""
    check_density_matrix(rho, tol)
    w = np.linalg.eigvalsh(rho)
    w = w[w > 1e-12]
    return float(-np.sum(w * np.log(w)))


def topo_entropy(
    state: StateVector,
    region_a: tuple[int, ...],
    region_b: tuple[int, ...],
    region_c: tuple[int, ...],
) -> TeeResult:
    """Kitaev-Preskill combination of the seven region entropies."""
    a, b, c = set(region_a), set(region_b), set(region_c)
    if a & b or a & c or b & c:
        raise ValueError("regions A, B, C must be disjoint")
    if len(a | b | c) > 12:
        raise ValueError("combined region too large for dense partial traces")

    def s(qubits: set[int]) -> float:
        return von_neumann_entropy(partial_trace(state, qubits))

    s_a, s_b, s_c = s(a), s(b), s(c)
    s_ab, s_ac, s_bc = s(a | b), s(a | c), s(b | c)
    s_abc = s(a | b | c)
    s_topo = s_a + s_b + s_c - s_ab - s_ac - s_bc + s_abc
    return TeeResult(s_a, s_b, s_c, s_ab, s_ac, s_bc, s_abc, s_topo)


def uhlmann_fidelity(rho: np.ndarray, rho_ideal: np.ndarray) -> float:
    """``tr sqrt(sqrt(rho) rho_ideal sqrt(rho))`` via eigensystem square roots."""
    rho = np.asarray(rho, dtype=complex)
    rho_ideal = np.asarray(rho_ideal, dtype=complex)
    if rho.shape != rho_ideal.shape:
        raise ValueError("density matrices must have equal dimensions")
    check_density_matrix(rho)
    check_density_matrix(rho_ideal)
    w, v = hermitian_eigensystem(rho)
    sqrt_rho = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    inner = sqrt_rho @ rho_ideal @ sqrt_rho
    w2 = np.linalg.eigvalsh((inner + inner.conj().T) / 2.0)
    return float(np.sum(np.sqrt(np.clip(w2, 0.0, None))))


def extract_lifetime(
    avg_signal: np.ndarray, threshold: float = 0.5
) -> tuple[int, bool]:
    """First period at which the averaged magnitude drops to the threshold.

    The input is ``|mean <Z_L>|`` per period (average first, then absolute
    value).  Returns ``(tau_star, censored)``; when the signal never
    crosses, ``tau_star`` is the horizon and ``censored`` is True.
    """
    values = np.asarray(avg_signal, dtype=float)
    if values.size == 0:
        raise ValueError("empty signal")
    below = np.nonzero(values <= threshold)[0]
    if len(below) == 0:
        return len(values) - 1, True
    return int(below[0]), False


def fit_exponential(
    sizes: np.ndarray,
    tau_stars: np.ndarray,
    censored: np.ndarray | None = None,
) -> LifetimeFit:
    """Least-squares fit of ``ln tau*`` against system size."""
    sizes = np.asarray(sizes, dtype=float)
    tau_stars = np.asarray(tau_stars, dtype=float)
    if censored is None:
        censored = np.zeros(len(sizes), dtype=bool)
    censored = np.asarray(censored, dtype=bool)
    keep = ~censored
    if keep.sum() < 2:
        raise ValueError("need at least two uncensored lifetimes to fit")
    if np.any(tau_stars[keep] <= 0):
        raise ValueError("lifetimes must be positive")
    slope, intercept = np.polyfit(sizes[keep], np.log(tau_stars[keep]), 1)
    return LifetimeFit(sizes, tau_stars, censored, float(slope), float(intercept))


def floquet_spectrum_small(
    lat: Lattice, realization: DisorderRealization
) -> np.ndarray:
    """Sorted eigenphases of the one-period unitary, in ``(-pi, pi]``."""
    from .builders import build_floquet_circuit

    if lat.num_qubits > 12:
        raise ValueError("dense Floquet spectrum limited to 12 qubits")
    u = circuit_unitary(build_floquet_circuit(lat, realization))
    phases = np.angle(np.linalg.eigvals(u))
    phases[phases <= -math.pi] += 2.0 * math.pi
    return np.sort(phases)


def pi_pairing_deviation(phases: np.ndarray) -> float:
    """How far the eigenphase multiset is from being invariant under a pi shift.

    For a spectrum whose phases come in pairs split by exactly pi, shifting
    every phase by pi permutes the multiset, so the sorted arrays coincide.
    """
    phases = np.sort(np.asarray(phases, dtype=float))
    shifted = np.sort(np.where(phases > 0.0, phases - math.pi, phases + math.pi))
    return float(np.max(np.abs(phases - shifted)))


def mean_and_stderr(values: np.ndarray, axis: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Arithmetic mean and standard error of the mean along ``axis``."""
    values = np.asarray(values, dtype=float)
    mean = values.mean(axis=axis)
    n = values.shape[axis]
    if n < 2:
        return mean, np.zeros_like(mean)
    stderr = values.std(axis=axis, ddof=1) / math.sqrt(n)
    return mean, stderr
