import math

import numpy as np
import pytest

from ftl.builders import (
    build_eigenstate_circuit,
    build_floquet_circuit,
    build_plaquette_evolution,
    build_u1_circuit,
    build_u2_circuit,
    single_qubit_drive_unitary,
)
from ftl.circuit import apply_circuit, circuit_unitary
from ftl.gates import gate_matrix
from ftl.lattice import Plaquette, build_lattice, sample_disorder
from ftl.linalg import unitary_distance
from ftl.pauli import PauliString
from ftl.statevector import StateVector, pauli_expectation

from helpers import X, kron_factor, pauli_string_matrix


def pauli_exponential(factors: dict[int, str], n: int, angle: float) -> np.ndarray:
    """Oracle: exp(i angle P) = cos(angle) I + i sin(angle) P."""
    mat = pauli_string_matrix(factors, n)
    return math.cos(angle) * np.eye(1 << n) + 1j * math.sin(angle) * mat


class TestDriveCircuit:
    def test_zero_field_is_spin_flip(self):
        lat = build_lattice(3, 2)
        real = sample_disorder(lat, 0.0, 4)
        circ = build_u1_circuit(lat, real)
        assert len(circ.gates) == 6
        for g in circ.gates:
            assert unitary_distance(gate_matrix(g), X) < 1e-12

    def test_single_qubit_exponential_oracle(self):
        field = (0.0, 0.0, 0.1)
        ham = (math.pi / 2) * np.array([[0, 1], [1, 0]], dtype=complex) + 0.1 * np.diag(
            [1.0, -1.0]
        )
        w, v = np.linalg.eigh(ham)
        oracle = (v * np.exp(-1j * w)) @ v.conj().T
        assert np.max(np.abs(single_qubit_drive_unitary(field) - oracle)) < 1e-10

    def test_full_kick_matches_kronecker_oracle(self):
        lat = build_lattice(3, 2)
        real = sample_disorder(lat, 0.8, 17)
        u = circuit_unitary(build_u1_circuit(lat, real))
        oracle = np.array([[1.0 + 0j]])
        for q in reversed(range(6)):
            oracle = np.kron(oracle, single_qubit_drive_unitary(real.field[q]))
        assert np.max(np.abs(u - oracle)) < 1e-10

    def test_random_fields_match_exponentials(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            field = tuple(rng.uniform(-1, 1, 3))
            vx = math.pi / 2 + field[0]
            ham = np.array(
                [[field[2], vx - 1j * field[1]], [vx + 1j * field[1], -field[2]]],
                dtype=complex,
            )
            w, v = np.linalg.eigh(ham)
            oracle = (v * np.exp(-1j * w)) @ v.conj().T
            assert np.max(np.abs(single_qubit_drive_unitary(field) - oracle)) < 1e-10


class TestPlaquetteEvolution:
    def test_zero_angle_is_identity(self):
        p = Plaquette("z", (0, 1, 2, 3), 0)
        u = circuit_unitary(build_plaquette_evolution(p, 0.0))
        assert unitary_distance(u, np.eye(16)) < 1e-12

    def test_half_pi_gives_pauli(self):
        for qubits in ((0, 1), (0, 1, 2, 3)):
            p = Plaquette("z", qubits, 0)
            u = circuit_unitary(build_plaquette_evolution(p, math.pi / 2))
            target = 1j * pauli_string_matrix({q: "Z" for q in qubits}, len(qubits))
            assert np.max(np.abs(u - target)) < 1e-10

    def test_twenty_random_angles_both_weights(self):
        rng = np.random.default_rng(42)
        for weight in (2, 4):
            qubits = tuple(range(weight))
            p = Plaquette("z", qubits, 0)
            for _ in range(20):
                angle = float(rng.uniform(-2 * math.pi, 2 * math.pi))
                u = circuit_unitary(build_plaquette_evolution(p, angle))
                oracle = pauli_exponential({q: "Z" for q in qubits}, weight, angle)
                assert unitary_distance(u, oracle) < 1e-9

    def test_cz_budget(self):
        counts2 = build_plaquette_evolution(Plaquette("z", (0, 1), 0), 0.3).gate_counts()
        counts4 = build_plaquette_evolution(Plaquette("z", (0, 1, 2, 3), 0), 0.3).gate_counts()
        assert counts2.get("cz", 0) <= 2
        assert counts4.get("cz", 0) <= 6


class TestPlaquetteHamiltonianCircuit:
    def test_3x2_matches_exponential_product(self):
        lat = build_lattice(3, 2)
        real = sample_disorder(lat, 0.4, 9)
        u = circuit_unitary(build_u2_circuit(lat, real))
        oracle = np.eye(64, dtype=complex)
        for p, a in zip(lat.z_plaquettes(), real.alpha):
            oracle = pauli_exponential({q: "Z" for q in p.qubits}, 6, a) @ oracle
        for p, b in zip(lat.x_plaquettes(), real.beta):
            oracle = pauli_exponential({q: "X" for q in p.qubits}, 6, b) @ oracle
        assert unitary_distance(u, oracle) < 1e-8

    def test_emission_order_is_irrelevant(self):
        # plaquette terms commute, so comparing against the product in the
        # opposite order must give the same unitary
        lat = build_lattice(3, 2)
        real = sample_disorder(lat, 0.0, 31)
        u = circuit_unitary(build_u2_circuit(lat, real))
        oracle = np.eye(64, dtype=complex)
        for p, b in zip(lat.x_plaquettes(), real.beta):
            oracle = pauli_exponential({q: "X" for q in p.qubits}, 6, b) @ oracle
        for p, a in zip(lat.z_plaquettes(), real.alpha):
            oracle = pauli_exponential({q: "Z" for q in p.qubits}, 6, a) @ oracle
        assert np.max(np.abs(u - oracle)) < 1e-10

    def test_zero_couplings_identity(self):
        lat = build_lattice(3, 2)
        real = sample_disorder(lat, 0.0, 1)
        real = type(real)(
            alpha=(0.0,) * len(real.alpha),
            beta=(0.0,) * len(real.beta),
            field=real.field,
            b_radius=real.b_radius,
            initial_bits=real.initial_bits,
            seed=real.seed,
        )
        u = circuit_unitary(build_u2_circuit(lat, real))
        assert unitary_distance(u, np.eye(64)) < 1e-12


class TestFloquetCircuit:
    def test_string_alternates_from_all_zeros(self):
        lat = build_lattice(3, 2)
        real = sample_disorder(lat, 0.0, 5)
        circ = build_floquet_circuit(lat, real)
        state = StateVector.zero(6)
        zl = lat.logical_z[0]
        apply_circuit(state, circ)
        assert pauli_expectation(state, zl) == pytest.approx(-1.0, abs=1e-10)
        apply_circuit(state, circ)
        assert pauli_expectation(state, zl) == pytest.approx(1.0, abs=1e-10)

    def test_composition_of_parts(self):
        lat = build_lattice(3, 2)
        real = sample_disorder(lat, 0.2, 8)
        u_full = circuit_unitary(build_floquet_circuit(lat, real))
        u_parts = circuit_unitary(build_u2_circuit(lat, real)) @ circuit_unitary(
            build_u1_circuit(lat, real)
        )
        assert np.max(np.abs(u_full - u_parts)) < 1e-10

    def test_conjugation_flips_string_at_zero_field(self):
        lat = build_lattice(3, 2)
        real = sample_disorder(lat, 0.0, 23)
        u = circuit_unitary(build_floquet_circuit(lat, real))
        z = pauli_string_matrix({q: "Z" for q in lat.logical_z[0].support}, 6)
        assert np.max(np.abs(u @ z @ u.conj().T + z)) < 1e-10


class TestEigenstateCircuit:
    def test_3x2_matches_projector_formula(self):
        lat = build_lattice(3, 2)
        state = StateVector.zero(6)
        apply_circuit(state, build_eigenstate_circuit(lat))
        vec = np.zeros(64, dtype=complex)
        vec[0] = 1.0
        eye = np.eye(64)
        for p in lat.x_plaquettes():
            vec = (eye + pauli_string_matrix({q: "X" for q in p.qubits}, 6)) @ vec
        vec = (eye + pauli_string_matrix({q: "X" for q in lat.logical_x[1].support}, 6)) @ vec
        vec /= np.linalg.norm(vec)
        assert abs(np.vdot(state.amplitudes, vec)) == pytest.approx(1.0, abs=1e-10)

    def test_3x6_expectations(self):
        lat = build_lattice(3, 6)
        state = StateVector.zero(18)
        apply_circuit(state, build_eigenstate_circuit(lat))
        for p in lat.plaquettes:
            assert pauli_expectation(state, p.pauli(18)) == pytest.approx(1.0, abs=1e-10)
        for x in lat.logical_x:
            assert pauli_expectation(state, x) == pytest.approx(1.0, abs=1e-10)
        for z in lat.logical_z:
            assert pauli_expectation(state, z) == pytest.approx(0.0, abs=1e-10)

    def test_gate_set_is_h_plus_cnot(self):
        lat = build_lattice(3, 6)
        kinds = set(build_eigenstate_circuit(lat).gate_counts())
        assert kinds <= {"h", "cnot"}

    def test_cat_row_choice(self):
        lat = build_lattice(3, 6)
        circ = build_eigenstate_circuit(lat)
        first = circ.gates[0]
        assert first.kind == "h"
        # the cat segment sits on the middle row (labels 7..12)
        assert lat.qubit_coord(first.qubits[0])[0] == 1
