"""Stochastic noise model: thermal relaxation, depolarizing, readout.

Noisy circuits are simulated with the Monte Carlo wavefunction method:
error operators are sampled layer by layer and inserted after the ideal
gates, and observables are averaged over an ensemble of trajectories.

The thermal-relaxation mixture applies, per qubit and per layer of
duration t,

* a reset to ``|0>`` with probability ``p0 = 1 - exp(-t/T1)``,
* a ``Z`` flip with probability
  ``p1 = (1/2) exp(-t/T1) (1 - exp(-t (1/T2 - 1/T1)))``,

which requires ``T2 <= T1``.  Depolarizing events apply one of the
``4^d - 1`` non-identity Paulis with total probability ``e_p``; the rates
are derived from benchmarked Pauli errors by subtracting the decoherence
contribution ``r_dec = (3/4) p0 + p1`` per involved qubit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .compiler import CompiledCircuit
from .statevector import StateVector, _apply_pauli_factor, apply_gate

GATE_CLASSES = ("sq", "cz", "cz_idle")

DEFAULT_T1_US = 163.0
DEFAULT_SQ_LAYER_NS = 24.0
CZ_LAYER_NS_DYNAMICS = 52.5
CZ_LAYER_NS_EIGENSTATE = 62.6
DEFAULT_PAULI_ERROR = {"sq": 0.48e-3, "cz": 6.4e-3, "cz_idle": 1.10e-3}
PAULI_ERROR_CZ_IDLE_EIGENSTATE = 1.37e-3

_PAULI_AXES = ("X", "Y", "Z")
# the 15 non-identity two-qubit Pauli labels, ordered for reproducible draws
_TWO_QUBIT_PAULIS = tuple(
    (a, b) for a in ("I", "X", "Y", "Z") for b in ("I", "X", "Y", "Z")
    if (a, b) != ("I", "I")
)


@dataclass
class NoiseModel:
    """Device noise parameters driving the trajectory engine.

    ``t2_us`` has no default: the spin-echo dephasing time must be supplied
    explicitly by configuration.
    """

    t2_us: float
    t1_us: float = DEFAULT_T1_US
    sq_layer_ns: float = DEFAULT_SQ_LAYER_NS
    cz_layer_ns: float = CZ_LAYER_NS_DYNAMICS
    pauli_error: dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_PAULI_ERROR)
    )
    readout: tuple[tuple[float, float], ...] | None = None  # per-qubit (F0, F1)
    enabled: bool = True

    def __post_init__(self) -> None:
        if self.t1_us <= 0 or self.t2_us <= 0:
            raise ValueError("T1 and T2 must be positive")
        if self.t2_us > self.t1_us:
            raise ValueError(
                "t2 must not exceed t1: the reset/Z mixture representation of "
                "thermal relaxation is only valid for T2 <= T1"
            )
        if self.sq_layer_ns <= 0 or self.cz_layer_ns <= 0:
            raise ValueError("layer durations must be positive")
        for cls in GATE_CLASSES:
            if cls not in self.pauli_error:
                raise ValueError(f"missing Pauli error rate for class {cls!r}")
            if not 0.0 <= self.pauli_error[cls] <= 1.0:
                raise ValueError(f"Pauli error rate for {cls!r} out of [0, 1]")
        if self.readout is not None:
            for f0, f1 in self.readout:
                if not (0.0 <= f0 <= 1.0 and 0.0 <= f1 <= 1.0):
                    raise ValueError("readout fidelities must lie in [0, 1]")

    def disabled_copy(self) -> "NoiseModel":
        return replace(self, enabled=False)


@dataclass(frozen=True)
class TrajectoryRng:
    """Counter-based random stream for one (realization, trajectory) pair."""

    master_seed: int
    realization_index: int
    trajectory_index: int

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(
            entropy=self.master_seed,
            spawn_key=(self.realization_index, self.trajectory_index),
        )
        return np.random.Generator(np.random.Philox(seq))


def decoherence_probabilities(
    t_ns: float, t1_us: float, t2_us: float
) -> tuple[float, float]:
    """Reset and Z-flip probabilities for an idle window of ``t_ns``."""
    if t_ns < 0:
        raise ValueError("duration must be non-negative")
    if t2_us > t1_us:
        raise ValueError(
            "t2 must not exceed t1: the reset/Z mixture representation of "
            "thermal relaxation is only valid for T2 <= T1"
        )
    t_us = t_ns * 1e-3
    p0 = 1.0 - math.exp(-t_us / t1_us)
    p1 = 0.5 * math.exp(-t_us / t1_us) * (
        1.0 - math.exp(-t_us * (1.0 / t2_us - 1.0 / t1_us))
    )
    return p0, p1


def decoherence_kraus(p0: float, p1: float) -> list[np.ndarray]:
    """The four Kraus operators of the relaxation/dephasing mixture."""
    if p0 < 0 or p1 < 0 or p0 + p1 > 1:
        raise ValueError("need p0, p1 >= 0 and p0 + p1 <= 1")
    m0 = math.sqrt(1.0 - p0 - p1) * np.eye(2, dtype=complex)
    m1 = math.sqrt(p0) * np.array([[1, 0], [0, 0]], dtype=complex)
    m2 = math.sqrt(p0) * np.array([[0, 1], [0, 0]], dtype=complex)
    m3 = math.sqrt(p1) * np.array([[1, 0], [0, -1]], dtype=complex)
    return [m0, m1, m2, m3]


def _reset_qubit(state: StateVector, qubit: int, rng: np.random.Generator) -> None:
    """Projective reset: measure the qubit, renormalize, flip a |1> outcome.

    The Born-weighted two-branch resolution reproduces the pair of damping
    Kraus operators on average (a one-sided projection would not, once the
    qubit is entangled).  A qubit found exactly in |1> resets
    deterministically.
    """
    v = state.amplitudes.reshape(-1, 2, 1 << qubit)
    p_zero = float(np.sum(np.abs(v[:, 0, :]) ** 2))
    if p_zero >= 1e-18 and rng.random() < p_zero:
        v[:, 1, :] = 0.0
        state.amplitudes /= math.sqrt(p_zero)
        return
    v[:, 0, :] = v[:, 1, :]
    v[:, 1, :] = 0.0
    nrm = np.linalg.norm(state.amplitudes)
    if nrm > 0:
        state.amplitudes /= nrm


def apply_stochastic_decoherence(
    state: StateVector,
    qubit: int,
    p0: float,
    p1: float,
    rng: np.random.Generator,
) -> StateVector:
    """Apply the relaxation mixture to one qubit (reset w.p. p0, Z w.p. p1).

    Branch selection uses p0 and p1 directly (mixture semantics), not the
    norm-weighted jump probabilities of the standard quantum-jump method.
    """
    u = rng.random()
    if u < p0:
        _reset_qubit(state, qubit, rng)
    elif u < p0 + p1:
        _apply_pauli_factor(state.amplitudes, "Z", qubit)
    return state


def apply_stochastic_depolarizing(
    state: StateVector,
    qubits: tuple[int, ...],
    e_p: float,
    rng: np.random.Generator,
) -> StateVector:
    """Uniform non-identity Pauli on ``qubits`` with total probability e_p."""
    if len(qubits) not in (1, 2):
        raise ValueError("depolarizing supports one or two qubits")
    if not 0.0 <= e_p <= 1.0:
        raise ValueError("e_p must lie in [0, 1]")
    if rng.random() >= e_p:
        return state
    if len(qubits) == 1:
        axis = _PAULI_AXES[rng.integers(3)]
        _apply_pauli_factor(state.amplitudes, axis, qubits[0])
    else:
        a, b = _TWO_QUBIT_PAULIS[rng.integers(15)]
        if a != "I":
            _apply_pauli_factor(state.amplitudes, a, qubits[0])
        if b != "I":
            _apply_pauli_factor(state.amplitudes, b, qubits[1])
    return state


def decoherence_pauli_rate(t_ns: float, model: NoiseModel) -> float:
    """Per-qubit Pauli-error-equivalent decoherence rate ``(3/4) p0 + p1``."""
    p0, p1 = decoherence_probabilities(t_ns, model.t1_us, model.t2_us)
    return 0.75 * p0 + p1


def rate_derivation_report(model: NoiseModel) -> dict[str, dict[str, float | bool]]:
    """Per gate class: benchmarked error, decoherence share, derived e_p."""
    report: dict[str, dict[str, float | bool]] = {}
    for cls in GATE_CLASSES:
        t = model.sq_layer_ns if cls == "sq" else model.cz_layer_ns
        per_qubit = decoherence_pauli_rate(t, model)
        involved = 2 if cls == "cz" else 1
        raw = model.pauli_error[cls] - involved * per_qubit
        report[cls] = {
            "epsilon_p": model.pauli_error[cls],
            "decoherence_rate": involved * per_qubit,
            "e_p": max(0.0, raw),
            "clamped": raw < 0.0,
        }
    return report


def derive_depolarizing_rates(model: NoiseModel) -> dict[str, float]:
    return {cls: float(info["e_p"]) for cls, info in rate_derivation_report(model).items()}


def run_noisy_trajectory(
    compiled: CompiledCircuit,
    model: NoiseModel,
    rng: np.random.Generator,
    state: StateVector | None = None,
) -> StateVector:
    """One stochastic pass of the compiled circuit.

    After every SQ layer each qubit sees a decoherence draw for the SQ-layer
    duration and each gate qubit an SQ-class depolarizing draw; after every
    CZ layer each qubit sees a CZ-duration decoherence draw, each CZ pair a
    two-qubit depolarizing draw and each idle qubit a CZ-idle draw.  Draw
    order is fixed (qubits ascending, gates in layer order) so a given rng
    stream always reproduces the same trajectory.
    """
    if not model.enabled:
        raise ValueError("noise model is disabled; run the noiseless path instead")
    n = compiled.circuit.num_qubits
    if state is None:
        state = StateVector.zero(n)
    rates = derive_depolarizing_rates(model)
    p_sq = decoherence_probabilities(model.sq_layer_ns, model.t1_us, model.t2_us)
    p_cz = decoherence_probabilities(model.cz_layer_ns, model.t1_us, model.t2_us)
    for kind, layer in compiled.layers():
        for g in layer:
            apply_gate(state, g)
        p0, p1 = p_sq if kind == "sq" else p_cz
        for q in range(n):
            apply_stochastic_decoherence(state, q, p0, p1, rng)
        if kind == "sq":
            for g in layer:
                apply_stochastic_depolarizing(state, g.qubits, rates["sq"], rng)
        else:
            in_cz = set()
            for g in layer:
                apply_stochastic_depolarizing(state, g.qubits, rates["cz"], rng)
                in_cz.update(g.qubits)
            for q in range(n):
                if q not in in_cz:
                    apply_stochastic_depolarizing(state, (q,), rates["cz_idle"], rng)
    if compiled.circuit.global_phase:
        state.amplitudes *= np.exp(1j * compiled.circuit.global_phase)
    return state


# ---------------------------------------------------------------------------
# readout

def sample_readout(
    state: StateVector,
    model: NoiseModel,
    shots: int,
    rng: np.random.Generator,
) -> dict[str, int]:
    """Born sampling followed by independent per-qubit assignment flips."""
    if model.readout is None:
        raise ValueError("noise model carries no readout fidelities")
    n = state.num_qubits
    if len(model.readout) != n:
        raise ValueError("readout fidelity list does not match qubit count")
    probs = state.probabilities()
    probs = probs / probs.sum()
    outcomes = rng.choice(len(probs), size=shots, p=probs)
    flips = rng.random((shots, n))
    counts: dict[str, int] = {}
    for s in range(shots):
        word = int(outcomes[s])
        for q in range(n):
            bit = (word >> q) & 1
            fidelity = model.readout[q][bit]
            if flips[s, q] >= fidelity:
                word ^= 1 << q
        key = format(word, f"0{n}b")
        counts[key] = counts.get(key, 0) + 1
    return counts


def correct_readout(counts: dict[str, int], model: NoiseModel) -> dict[str, float]:
    """Invert the tensor-product confusion matrix on the empirical distribution."""
    if model.readout is None:
        raise ValueError("noise model carries no readout fidelities")
    n = len(next(iter(counts)))
    if len(model.readout) != n:
        raise ValueError("readout fidelity list does not match bitstring length")
    total = sum(counts.values())
    p = np.zeros(1 << n)
    for key, c in counts.items():
        p[int(key, 2)] = c / total
    t = p.reshape([2] * n)
    for q in range(n):
        f0, f1 = model.readout[q]
        det = f0 + f1 - 1.0
        if abs(det) < 1e-12:
            raise ValueError(
                f"confusion matrix for qubit {q} is singular (F0 + F1 = 1)"
            )
        # confusion C maps true -> measured; apply C^{-1} along this axis
        cinv = np.array([[f1, -(1.0 - f1)], [-(1.0 - f0), f0]]) / det
        axis = n - 1 - q
        t = np.moveaxis(np.tensordot(cinv, np.moveaxis(t, axis, 0), axes=(1, 0)), 0, axis)
    q_probs = t.reshape(-1)
    return {format(i, f"0{n}b"): float(q_probs[i]) for i in range(1 << n)}
