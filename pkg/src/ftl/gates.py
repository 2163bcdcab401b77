"""Gate vocabulary, gate matrices, and the U3 Euler decomposition.

Conventions used throughout the package:

* rotations: ``RX(t) = exp(-i t X / 2)`` and likewise for Y and Z;
* ``U3(alpha, phi, theta) = Rxy(alpha, phi) @ diag(1, e^{i theta})``,
  i.e. a (virtual) z rotation followed by a rotation by ``alpha`` about an
  axis in the xy plane with azimuth ``phi``;
* two-qubit matrices are written in the basis ``|q_first, q_second>`` with
  the first qubit label as the most significant bit; for CRZ the first
  qubit is the control.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

ONE_QUBIT_KINDS = frozenset({"rx", "ry", "rz", "h", "u3"})
TWO_QUBIT_KINDS = frozenset({"cz", "crz", "cnot"})
GATE_KINDS = ONE_QUBIT_KINDS | TWO_QUBIT_KINDS

PARAM_COUNT = {
    "rx": 1, "ry": 1, "rz": 1, "h": 0, "u3": 3,
    "cz": 0, "crz": 1, "cnot": 0,
}

DIAGONAL_KINDS = frozenset({"rz", "cz", "crz"})


@dataclass(frozen=True)
class Gate:
    """A single gate instance: a kind, target qubit(s) and bound angles."""

    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    # Free-form annotation (e.g. "dd" for dynamical-decoupling inserts,
    # "fixed" for snapped synthesis parameters); never affects semantics.
    tag: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        want = 1 if self.kind in ONE_QUBIT_KINDS else 2
        if len(self.qubits) != want:
            raise ValueError(f"{self.kind} takes {want} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"duplicate qubit in {self.kind} gate: {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {self.qubits}")
        if len(self.params) != PARAM_COUNT[self.kind]:
            raise ValueError(
                f"{self.kind} takes {PARAM_COUNT[self.kind]} parameter(s), "
                f"got {len(self.params)}"
            )
        if any(not math.isfinite(p) for p in self.params):
            raise ValueError(f"non-finite angle in {self.kind} gate: {self.params}")

    @property
    def num_qubits_acted(self) -> int:
        return len(self.qubits)


def rx(q: int, theta: float) -> Gate:
    return Gate("rx", (q,), (float(theta),))


def ry(q: int, theta: float) -> Gate:
    return Gate("ry", (q,), (float(theta),))


def rz(q: int, theta: float) -> Gate:
    return Gate("rz", (q,), (float(theta),))


def h(q: int) -> Gate:
    return Gate("h", (q,))


def u3(q: int, alpha: float, phi: float, theta: float) -> Gate:
    return Gate("u3", (q,), (float(alpha), float(phi), float(theta)))


def cz(a: int, b: int) -> Gate:
    return Gate("cz", (a, b))


def crz(control: int, target: int, theta: float) -> Gate:
    return Gate("crz", (control, target), (float(theta),))


def cnot(control: int, target: int) -> Gate:
    return Gate("cnot", (control, target))


_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def rx_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    return np.array(
        [[cmath.exp(-0.5j * theta), 0.0], [0.0, cmath.exp(0.5j * theta)]],
        dtype=complex,
    )


def u3_matrix(alpha: float, phi: float, theta: float) -> np.ndarray:
    """Rxy(alpha, phi) @ diag(1, e^{i theta})."""
    c, s = math.cos(alpha / 2.0), math.sin(alpha / 2.0)
    return np.array(
        [
            [c, -1j * cmath.exp(1j * (theta - phi)) * s],
            [-1j * cmath.exp(1j * phi) * s, cmath.exp(1j * theta) * c],
        ],
        dtype=complex,
    )


_CZ = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def crz_matrix(theta: float) -> np.ndarray:
    m = np.eye(4, dtype=complex)
    m[2, 2] = cmath.exp(-0.5j * theta)
    m[3, 3] = cmath.exp(0.5j * theta)
    return m


def gate_matrix(gate: Gate) -> np.ndarray:
    """Dense 2x2 or 4x4 unitary of a gate (first qubit = most significant bit)."""
    k = gate.kind
    if k == "rx":
        return rx_matrix(gate.params[0])
    if k == "ry":
        return ry_matrix(gate.params[0])
    if k == "rz":
        return rz_matrix(gate.params[0])
    if k == "h":
        return _H.copy()
    if k == "u3":
        return u3_matrix(*gate.params)
    if k == "cz":
        return _CZ.copy()
    if k == "cnot":
        return _CNOT.copy()
    if k == "crz":
        return crz_matrix(gate.params[0])
    raise ValueError(f"unknown gate kind {k!r}")


def _wrap_angle(a: float) -> float:
    """Map an angle into (-pi, pi]."""
    a = math.fmod(a, 2.0 * math.pi)
    if a <= -math.pi:
        a += 2.0 * math.pi
    elif a > math.pi:
        a -= 2.0 * math.pi
    return a


def euler_decompose(u: np.ndarray, tol: float = 1e-10) -> tuple[float, float, float, float]:
    """Factor a 2x2 unitary as ``e^{i gamma} U3(alpha, phi, theta)``.

    Returns ``(alpha, phi, theta, gamma)``.  Raises ValueError when the
    input is not unitary within ``tol``.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(2))) > tol:
        raise ValueError("matrix is not unitary within tolerance")

    c = abs(u[0, 0])
    s = abs(u[1, 0])
    alpha = 2.0 * math.atan2(s, c)
    # Phases must be read off entries of non-negligible magnitude, otherwise
    # floating-point noise in a tiny entry pollutes the whole factorization.
    if c >= 1e-4:
        gamma = cmath.phase(u[0, 0])
        theta = _wrap_angle(cmath.phase(u[1, 1]) - gamma)
        if s > 1e-14:
            # u10 = -i e^{i gamma} e^{i phi} sin(alpha/2)
            phi = _wrap_angle(cmath.phase(u[1, 0]) - gamma + math.pi / 2.0)
        else:
            phi = 0.0
    else:  # alpha near pi; fix phi = 0 and read the phases off the off-diagonal
        phi = 0.0
        gamma = _wrap_angle(cmath.phase(u[1, 0]) + math.pi / 2.0)
        theta = _wrap_angle(cmath.phase(u[0, 1]) - cmath.phase(u[1, 0]))
    return alpha, phi, theta, gamma
