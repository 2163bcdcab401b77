"""Ordered gate programs, the line-based text format, and dense unitaries."""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .gates import GATE_KINDS, PARAM_COUNT, Gate
from .statevector import StateVector, apply_gate, apply_gate_to_array

UNITARY_MAX_QUBITS = 12


@dataclass
class Circuit:
    num_qubits: int
    gates: list[Gate] = field(default_factory=list)
    # Layer boundaries: a value b means "boundary before gates[b]".
    barriers: list[int] = field(default_factory=list)
    global_phase: float = 0.0

    def add(self, gate: Gate) -> "Circuit":
        for q in gate.qubits:
            if q >= self.num_qubits:
                raise ValueError(
                    f"gate qubit {q} out of range for {self.num_qubits}-qubit circuit"
                )
        self.gates.append(gate)
        return self

    def extend(self, gates) -> "Circuit":
        for g in gates:
            self.add(g)
        return self

    def barrier(self) -> "Circuit":
        pos = len(self.gates)
        if pos and (not self.barriers or self.barriers[-1] != pos):
            self.barriers.append(pos)
        return self

    def layers(self) -> list[list[Gate]]:
        """Gates split at barrier positions (one layer when no barriers)."""
        spans = [0] + [b for b in self.barriers if 0 < b < len(self.gates)]
        spans.append(len(self.gates))
        return [self.gates[a:b] for a, b in zip(spans, spans[1:]) if b > a]

    def gate_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for g in self.gates:
            counts[g.kind] = counts.get(g.kind, 0) + 1
        return counts

    def concat(self, other: "Circuit") -> "Circuit":
        if other.num_qubits != self.num_qubits:
            raise ValueError("qubit counts differ")
        offset = len(self.gates)
        self.barrier()
        self.gates.extend(other.gates)
        self.barriers.extend(b + offset for b in other.barriers if 0 < b < len(other.gates))
        self.global_phase += other.global_phase
        return self

    def copy(self) -> "Circuit":
        return Circuit(self.num_qubits, list(self.gates), list(self.barriers), self.global_phase)


def apply_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    """Run the circuit on the state in place (global phase included)."""
    if circuit.num_qubits != state.num_qubits:
        raise ValueError("circuit and state have different qubit counts")
    for g in circuit.gates:
        apply_gate(state, g)
    if circuit.global_phase:
        state.amplitudes *= cmath.exp(1j * circuit.global_phase)
    return state


class PreparedCircuit:
    """A circuit with gate matrices precomputed for repeated application.

    Worth using when the same circuit is applied once per drive period for
    hundreds of periods; semantics match :func:`apply_circuit` exactly.
    """

    def __init__(self, circuit: Circuit):
        from .statevector import _apply_1q, _apply_2q, _apply_cz, _apply_crz, _apply_rz
        from .gates import gate_matrix

        self.num_qubits = circuit.num_qubits
        self.phase = cmath.exp(1j * circuit.global_phase) if circuit.global_phase else None
        self._ops: list[tuple] = []
        for g in circuit.gates:
            if g.kind == "rz":
                self._ops.append((_apply_rz, (g.params[0], g.qubits[0])))
            elif g.kind == "cz":
                self._ops.append((_apply_cz, (g.qubits[0], g.qubits[1])))
            elif g.kind == "crz":
                self._ops.append((_apply_crz, (g.qubits[0], g.qubits[1], g.params[0])))
            elif len(g.qubits) == 1:
                self._ops.append((_apply_1q, (gate_matrix(g), g.qubits[0])))
            else:
                self._ops.append((_apply_2q, (gate_matrix(g), g.qubits[0], g.qubits[1])))

    def apply(self, state: StateVector) -> StateVector:
        if state.num_qubits != self.num_qubits:
            raise ValueError("circuit and state have different qubit counts")
        amps = state.amplitudes
        for fn, args in self._ops:
            fn(amps, *args)
        if self.phase is not None:
            state.amplitudes *= self.phase
        return state


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the circuit (ordered product of gate unitaries)."""
    n = circuit.num_qubits
    if n > UNITARY_MAX_QUBITS:
        raise ValueError(f"circuit too wide for a dense unitary ({n} qubits)")
    u = np.eye(1 << n, dtype=np.complex128)
    flat = u.reshape(-1)
    # Row index bits sit above the column bits, so acting on "qubit q + n"
    # of the flattened matrix applies the gate to every column at once.
    for g in circuit.gates:
        apply_gate_to_array(flat, g, bit_offset=n)
    if circuit.global_phase:
        u *= cmath.exp(1j * circuit.global_phase)
    return u


# ---------------------------------------------------------------------------
# text format: bit-exact, line-based, UTF-8, LF

_HEADER_PREFIX = "circuit v1 qubits="


def _format_float(x: float) -> str:
    return f"{x:.17g}"


def circuit_to_text(circuit: Circuit) -> str:
    lines = [f"{_HEADER_PREFIX}{circuit.num_qubits}"]
    boundaries = set(b for b in circuit.barriers if 0 < b < len(circuit.gates))
    for i, g in enumerate(circuit.gates):
        if i in boundaries:
            lines.append("barrier")
        parts = [g.kind] + [f"q{q}" for q in g.qubits]
        parts += [f"p{j + 1}={_format_float(p)}" for j, p in enumerate(g.params)]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def circuit_from_text(text: str) -> Circuit:
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines or not lines[0].startswith(_HEADER_PREFIX):
        raise ValueError("missing 'circuit v1 qubits=<N>' header")
    try:
        n = int(lines[0][len(_HEADER_PREFIX):])
    except ValueError as exc:
        raise ValueError(f"bad qubit count in header: {lines[0]!r}") from exc
    circ = Circuit(n)
    for ln in lines[1:]:
        tokens = ln.split()
        if tokens[0] == "barrier":
            circ.barrier()
            continue
        kind = tokens[0]
        if kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {kind!r} in line {ln!r}")
        qubits: list[int] = []
        params: list[float] = []
        for tok in tokens[1:]:
            if tok.startswith("q") and "=" not in tok:
                qubits.append(int(tok[1:]))
            elif tok.startswith("p") and "=" in tok:
                params.append(float(tok.split("=", 1)[1]))
            else:
                raise ValueError(f"bad token {tok!r} in line {ln!r}")
        if len(params) != PARAM_COUNT[kind]:
            raise ValueError(f"wrong parameter count in line {ln!r}")
        circ.add(Gate(kind, tuple(qubits), tuple(params)))
    return circ
