"""Analytic circuit construction for the driven surface-code model.

The drive alternates a transverse kick with plaquette evolution over one
period ``T = 2`` (half-period 1 for each part, so coupling angles enter the
circuits unscaled):

* ``U1 = exp(-i H1)`` with ``H1 = sum_k [(pi/2) X_k + B_k . sigma_k]`` is a
  tensor product of single-qubit rotations, one U3 per qubit;
* ``U2 = exp(-i H2)`` with ``H2 = -sum alpha_p A_p - sum beta_q B_q``
  factorizes exactly over the mutually commuting plaquette terms, each
  realized by a parity ladder; X-type checks are conjugated by Hadamards.

The eigenstate circuit prepares the symmetric superposition of the two
degenerate surface-code ground states via a cat-state segment followed by
one fan-out per X-type check.
"""
from __future__ import annotations

import math

import numpy as np

from .circuit import Circuit
from .gates import Gate, cz, euler_decompose, h, rz, u3, cnot
from .lattice import DisorderRealization, Lattice, Plaquette


def single_qubit_drive_unitary(field: tuple[float, float, float]) -> np.ndarray:
    """``exp(-i [(pi/2) X + B . sigma])`` for one qubit, in closed form."""
    vx = math.pi / 2.0 + field[0]
    vy, vz = field[1], field[2]
    r = math.sqrt(vx * vx + vy * vy + vz * vz)
    eye = np.eye(2, dtype=complex)
    if r == 0.0:
        return eye
    axis = np.array(
        [[vz, vx - 1j * vy], [vx + 1j * vy, -vz]], dtype=complex
    ) / r
    return math.cos(r) * eye - 1j * math.sin(r) * axis


def build_u1_circuit(lat: Lattice, realization: DisorderRealization) -> Circuit:
    """One U3 per qubit realizing the transverse kick with its on-site field."""
    if len(realization.field) != lat.num_qubits:
        raise ValueError("realization does not match the lattice")
    circ = Circuit(lat.num_qubits)
    for q in range(lat.num_qubits):
        alpha, phi, theta, gamma = euler_decompose(
            single_qubit_drive_unitary(realization.field[q])
        )
        circ.add(u3(q, alpha, phi, theta))
        circ.global_phase += gamma
    return circ


def _cnot_as_h_cz(control: int, target: int) -> list[Gate]:
    return [h(target), cz(control, target), h(target)]


def build_plaquette_evolution(p: Plaquette, angle: float) -> Circuit:
    """Circuit for ``exp(i angle Z...Z)`` on the plaquette's qubits.

    The X-type wrapper (Hadamard conjugation) is added by the caller, so the
    generated circuit always evolves the Z-form string.  Parity is
    accumulated down a CNOT ladder, rotated, and unaccumulated; every CNOT
    is expanded to H CZ H, giving 6 CZs at weight 4 and 2 at weight 2.
    """
    if p.weight not in (2, 4):
        raise ValueError(f"unsupported plaquette weight {p.weight}")
    qs = list(p.qubits)
    n = max(qs) + 1
    circ = Circuit(n)
    for a, b in zip(qs, qs[1:]):
        circ.extend(_cnot_as_h_cz(a, b))
    circ.add(rz(qs[-1], -2.0 * angle))
    for a, b in reversed(list(zip(qs, qs[1:]))):
        circ.extend(_cnot_as_h_cz(a, b))
    return circ


def build_u2_circuit(lat: Lattice, realization: DisorderRealization) -> Circuit:
    """Plaquette evolution ``prod_p e^{i alpha_p A_p} prod_q e^{i beta_q B_q}``.

    Plaquettes are emitted group by group (two Z groups, then two X groups);
    X-type checks are sandwiched between Hadamard layers on their support.
    """
    angles: dict[Plaquette, float] = {}
    for p, a in zip(lat.z_plaquettes(), realization.alpha):
        angles[p] = a
    for p, b in zip(lat.x_plaquettes(), realization.beta):
        angles[p] = b
    circ = Circuit(lat.num_qubits)
    for group in range(4):
        members = [p for p in lat.plaquettes if p.group_index == group]
        for p in members:
            body = build_plaquette_evolution(p, angles[p])
            if p.kind == "x":
                for q in p.qubits:
                    circ.add(h(q))
            for g in body.gates:
                circ.add(g)
            circ.global_phase += body.global_phase
            if p.kind == "x":
                for q in p.qubits:
                    circ.add(h(q))
        if members:
            circ.barrier()
    return circ


def build_floquet_circuit(lat: Lattice, realization: DisorderRealization) -> Circuit:
    """One full drive period: the kick circuit followed by plaquette evolution."""
    circ = build_u1_circuit(lat, realization)
    circ.concat(build_u2_circuit(lat, realization))
    return circ


def build_eigenstate_circuit(lat: Lattice, cat_row: int = 1) -> Circuit:
    """Prepare the symmetric ground-state superposition from ``|0...0>``.

    A GHZ (cat) segment on ``cat_row`` realizes the logical-X projector;
    afterwards each X-type check is realized by a Hadamard on a fresh
    control qubit plus CNOT fan-out.  Raises when no fresh control exists.
    """
    if not 0 <= cat_row < lat.rows:
        raise ValueError(f"cat_row {cat_row} out of range")
    n = lat.num_qubits
    circ = Circuit(n)
    row_qubits = [lat.qubit_index(cat_row, c) for c in range(lat.cols)]
    entangled: set[int] = set()

    control = min(row_qubits)
    circ.add(h(control))
    chain = sorted(row_qubits, key=lambda q: lat.qubit_coord(q)[1])
    pos = chain.index(control)
    for i in range(pos, len(chain) - 1):  # walk right, then left, along the row
        circ.add(cnot(chain[i], chain[i + 1]))
    for i in range(pos, 0, -1):
        circ.add(cnot(chain[i], chain[i - 1]))
    entangled.update(row_qubits)
    circ.barrier()

    x_checks = sorted(
        lat.x_plaquettes(),
        key=lambda p: min(lat.qubit_coord(q) for q in p.qubits),
    )
    for p in x_checks:
        fresh = [q for q in p.qubits if q not in entangled]
        if not fresh:
            raise RuntimeError(
                f"no fresh control qubit available for X check on {p.qubits}; "
                "the fan-out construction does not apply to this lattice"
            )
        control = min(fresh)
        circ.add(h(control))
        for q in p.qubits:
            if q != control:
                circ.add(cnot(control, q))
        entangled.update(p.qubits)
    return circ
