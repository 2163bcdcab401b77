"""Dense state-vector engine: gate kernels, Pauli expectations, partial trace.

Basis convention: bit ``k`` of the computational-basis index is qubit ``k``
(qubit 0 is the least significant bit).  Bitstrings therefore render with
qubit 0 as the rightmost character.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gates import Gate, gate_matrix
from .pauli import PauliString

MAX_QUBITS = 24
PARTIAL_TRACE_MAX = 12


@dataclass
class StateVector:
    """Normalized complex amplitudes over the 2^N computational basis."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}]")
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise ValueError("amplitude array length must be 2**num_qubits")
        if self.amplitudes.dtype != np.complex128:
            self.amplitudes = self.amplitudes.astype(np.complex128)

    @classmethod
    def zero(cls, num_qubits: int) -> "StateVector":
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "StateVector":
        """Computational basis state; ``bits[k]`` is the value of qubit k."""
        n = len(bits)
        index = 0
        for k, b in enumerate(bits):
            if b not in (0, 1):
                raise ValueError("bits must be 0 or 1")
            index |= b << k
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n, amps)

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


# ---------------------------------------------------------------------------
# kernels (operate on a flat array; `bit` is the index bit the gate acts on)

def _apply_1q(a: np.ndarray, m: np.ndarray, bit: int) -> None:
    v = a.reshape(-1, 2, 1 << bit)
    b0 = v[:, 0, :].copy()
    b1 = v[:, 1, :]
    v[:, 0, :] = m[0, 0] * b0 + m[0, 1] * b1
    v[:, 1, :] = m[1, 0] * b0 + m[1, 1] * b1


def _apply_rz(a: np.ndarray, theta: float, bit: int) -> None:
    v = a.reshape(-1, 2, 1 << bit)
    v[:, 0, :] *= cmath.exp(-0.5j * theta)
    v[:, 1, :] *= cmath.exp(0.5j * theta)


def _two_bit_view(a: np.ndarray, hi: int, lo: int) -> np.ndarray:
    """View with axes [..., bit hi, ..., bit lo, ...]; requires hi > lo."""
    return a.reshape(-1, 2, 1 << (hi - lo - 1), 2, 1 << lo)


def _apply_cz(a: np.ndarray, bit_a: int, bit_b: int) -> None:
    hi, lo = max(bit_a, bit_b), min(bit_a, bit_b)
    v = _two_bit_view(a, hi, lo)
    v[:, 1, :, 1, :] *= -1.0


def _apply_crz(a: np.ndarray, control_bit: int, target_bit: int, theta: float) -> None:
    hi, lo = max(control_bit, target_bit), min(control_bit, target_bit)
    v = _two_bit_view(a, hi, lo)
    lo_phase, hi_phase = cmath.exp(-0.5j * theta), cmath.exp(0.5j * theta)
    if control_bit == hi:
        v[:, 1, :, 0, :] *= lo_phase
        v[:, 1, :, 1, :] *= hi_phase
    else:
        v[:, 0, :, 1, :] *= lo_phase
        v[:, 1, :, 1, :] *= hi_phase


def _apply_2q(a: np.ndarray, m: np.ndarray, bit_a: int, bit_b: int) -> None:
    """General two-qubit gate; m is in the |bit_a, bit_b> basis (bit_a = MSB)."""
    hi, lo = max(bit_a, bit_b), min(bit_a, bit_b)
    v = _two_bit_view(a, hi, lo)
    if bit_a == hi:
        blocks = [v[:, i, :, j, :].copy() for i in (0, 1) for j in (0, 1)]
    else:
        blocks = [v[:, j, :, i, :].copy() for i in (0, 1) for j in (0, 1)]
    for g in range(4):
        new = m[g, 0] * blocks[0]
        for gp in range(1, 4):
            new += m[g, gp] * blocks[gp]
        i, j = divmod(g, 2)
        if bit_a == hi:
            v[:, i, :, j, :] = new
        else:
            v[:, j, :, i, :] = new


def apply_gate_to_array(a: np.ndarray, gate: Gate, bit_offset: int = 0) -> None:
    """Apply a gate in place to a flat amplitude array.

    ``bit_offset`` shifts the gate's qubit indices; it lets the same kernels
    act on the row index of a matrix stored row-major.
    """
    k = gate.kind
    if k == "rz":
        _apply_rz(a, gate.params[0], gate.qubits[0] + bit_offset)
    elif k == "cz":
        _apply_cz(a, gate.qubits[0] + bit_offset, gate.qubits[1] + bit_offset)
    elif k == "crz":
        _apply_crz(
            a, gate.qubits[0] + bit_offset, gate.qubits[1] + bit_offset, gate.params[0]
        )
    elif len(gate.qubits) == 1:
        _apply_1q(a, gate_matrix(gate), gate.qubits[0] + bit_offset)
    else:
        _apply_2q(
            a, gate_matrix(gate), gate.qubits[0] + bit_offset, gate.qubits[1] + bit_offset
        )


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply one gate to the state (in place; the state is also returned)."""
    for q in gate.qubits:
        if q >= state.num_qubits:
            raise ValueError(
                f"gate qubit {q} out of range for {state.num_qubits}-qubit state"
            )
    apply_gate_to_array(state.amplitudes, gate)
    return state


# ---------------------------------------------------------------------------
# observables

_INDEX_CACHE: dict[int, np.ndarray] = {}


def _basis_indices(n: int) -> np.ndarray:
    arr = _INDEX_CACHE.get(n)
    if arr is None:
        arr = np.arange(1 << n, dtype=np.uint64)
        _INDEX_CACHE[n] = arr
    return arr


def _apply_pauli_factor(a: np.ndarray, axis: str, bit: int) -> None:
    v = a.reshape(-1, 2, 1 << bit)
    if axis == "Z":
        v[:, 1, :] *= -1.0
    elif axis == "X":
        b0 = v[:, 0, :].copy()
        v[:, 0, :] = v[:, 1, :]
        v[:, 1, :] = b0
    else:  # Y
        b0 = v[:, 0, :].copy()
        v[:, 0, :] = -1j * v[:, 1, :]
        v[:, 1, :] = 1j * b0
    return None


def apply_pauli(state: StateVector, p: PauliString) -> StateVector:
    if p.num_qubits != state.num_qubits:
        raise ValueError("Pauli string and state have different qubit counts")
    for q, axis in p.factors:
        _apply_pauli_factor(state.amplitudes, axis, q)
    return state


def pauli_expectation(state: StateVector, p: PauliString) -> float:
    """<psi|P|psi> without materializing the 2^N x 2^N operator."""
    if p.num_qubits != state.num_qubits:
        raise ValueError("Pauli string and state have different qubit counts")
    if p.is_z_type():
        mask = np.uint64(0)
        for q, _ in p.factors:
            mask |= np.uint64(1 << q)
        parity = np.bitwise_count(_basis_indices(state.num_qubits) & mask) & np.uint64(1)
        signs = 1.0 - 2.0 * parity.astype(np.float64)
        return float(np.dot(state.probabilities(), signs))
    phi = state.copy()
    apply_pauli(phi, p)
    return float(np.vdot(state.amplitudes, phi.amplitudes).real)


def partial_trace(state: StateVector, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix over ``keep``.

    Bit ``j`` of the reduced index is the j-th smallest kept qubit.
    """
    keep = sorted(set(keep))
    n = state.num_qubits
    if any(q < 0 or q >= n for q in keep):
        raise ValueError("keep set contains out-of-range qubits")
    if len(keep) > PARTIAL_TRACE_MAX:
        raise ValueError(
            f"cannot keep more than {PARTIAL_TRACE_MAX} qubits in dense form"
        )
    if not keep:
        raise ValueError("keep set is empty")
    axes_keep = [n - 1 - q for q in reversed(keep)]  # descending qubit order
    others = [ax for ax in range(n) if ax not in axes_keep]
    psi = state.amplitudes.reshape([2] * n)
    m = psi.transpose(axes_keep + others).reshape(1 << len(keep), -1)
    return m @ m.conj().T


def bits_to_string(bits: Sequence[int]) -> str:
    """Render bits (indexed by qubit) with qubit 0 rightmost."""
    return "".join(str(b) for b in reversed(list(bits)))


def index_to_bitstring(index: int, num_qubits: int) -> str:
    return format(index, f"0{num_qubits}b")
