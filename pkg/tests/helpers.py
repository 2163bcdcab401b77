"""Independent dense oracles used across the test suite.

Everything here builds operators by explicit Kronecker products and basis
enumeration, deliberately avoiding the package's strided kernels so the
tests check one implementation against a different one.
"""
import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
AXES = {"X": X, "Y": Y, "Z": Z}


def kron_factor(m: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Embed a single-qubit matrix (qubit 0 = least significant bit)."""
    out = np.array([[1.0 + 0j]])
    for k in reversed(range(n)):
        out = np.kron(out, m if k == qubit else I2)
    return out


def two_qubit_embed(m: np.ndarray, qa: int, qb: int, n: int) -> np.ndarray:
    """Embed a 4x4 matrix written in the |qa, qb> basis (qa = MSB)."""
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        ba, bb = (col >> qa) & 1, (col >> qb) & 1
        for gout in range(4):
            oa, ob = divmod(gout, 2)
            row = (col & ~((1 << qa) | (1 << qb))) | (oa << qa) | (ob << qb)
            out[row, col] += m[gout, 2 * ba + bb]
    return out


def pauli_string_matrix(factors: dict[int, str], n: int) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for k in reversed(range(n)):
        out = np.kron(out, AXES[factors[k]] if k in factors else I2)
    return out


def gate_to_dense(gate, n: int) -> np.ndarray:
    from ftl.gates import gate_matrix

    m = gate_matrix(gate)
    if len(gate.qubits) == 1:
        return kron_factor(m, gate.qubits[0], n)
    return two_qubit_embed(m, gate.qubits[0], gate.qubits[1], n)


def circuit_to_dense(circuit) -> np.ndarray:
    import cmath

    u = np.eye(1 << circuit.num_qubits, dtype=complex)
    for g in circuit.gates:
        u = gate_to_dense(g, circuit.num_qubits) @ u
    if circuit.global_phase:
        u = u * cmath.exp(1j * circuit.global_phase)
    return u


def random_state(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def random_unitary(dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density_matrix(dim: int, seed: int, rank: int | None = None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    rank = rank or dim
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_gate(rng: np.random.Generator, n: int):
    from ftl.gates import PARAM_COUNT, Gate

    kind = str(rng.choice(["rx", "ry", "rz", "h", "u3", "cz", "crz", "cnot"]))
    if kind in ("cz", "crz", "cnot"):
        qa, qb = map(int, rng.choice(n, 2, replace=False))
        qubits = (qa, qb)
    else:
        qubits = (int(rng.integers(n)),)
    params = tuple(float(x) for x in rng.uniform(-2 * np.pi, 2 * np.pi, PARAM_COUNT[kind]))
    return Gate(kind, qubits, params)


def random_circuit(seed: int, n: int, length: int):
    from ftl.circuit import Circuit

    rng = np.random.default_rng(seed)
    c = Circuit(n)
    for _ in range(length):
        c.add(random_gate(rng, n))
    return c
