"""Pauli strings: sparse multi-qubit products of X, Y, Z factors."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .gates import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z

_AXES = ("X", "Y", "Z")
_AXIS_MATRIX = {"X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


@dataclass(frozen=True)
class PauliString:
    """A product of single-qubit Paulis; absent qubits carry the identity."""

    num_qubits: int
    factors: tuple[tuple[int, str], ...]  # sorted by qubit index

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for q, axis in self.factors:
            if axis not in _AXES:
                raise ValueError(f"unknown Pauli axis {axis!r}")
            if not 0 <= q < self.num_qubits:
                raise ValueError(f"qubit {q} out of range for {self.num_qubits} qubits")
            if q in seen:
                raise ValueError(f"duplicate qubit {q} in Pauli string")
            seen.add(q)
        if tuple(sorted(q for q, _ in self.factors)) != tuple(q for q, _ in self.factors):
            raise ValueError("factors must be sorted by qubit index")

    @classmethod
    def from_map(cls, num_qubits: int, mapping: Mapping[int, str]) -> "PauliString":
        return cls(num_qubits, tuple(sorted((int(q), a) for q, a in mapping.items())))

    @classmethod
    def z_string(cls, num_qubits: int, qubits: Iterable[int]) -> "PauliString":
        return cls.from_map(num_qubits, {q: "Z" for q in qubits})

    @classmethod
    def x_string(cls, num_qubits: int, qubits: Iterable[int]) -> "PauliString":
        return cls.from_map(num_qubits, {q: "X" for q in qubits})

    @property
    def weight(self) -> int:
        return len(self.factors)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.factors)

    def axis_on(self, qubit: int) -> str | None:
        for q, a in self.factors:
            if q == qubit:
                return a
        return None

    def is_z_type(self) -> bool:
        return all(a == "Z" for _, a in self.factors)

    def commutes_with(self, other: "PauliString") -> bool:
        """True when the two strings commute (even number of clashing factors)."""
        if self.num_qubits != other.num_qubits:
            raise ValueError("qubit counts differ")
        theirs = dict(other.factors)
        clashes = sum(
            1 for q, a in self.factors if q in theirs and theirs[q] != a
        )
        return clashes % 2 == 0

    def dense(self) -> np.ndarray:
        """Dense matrix of the string; qubit 0 is the least significant bit."""
        if self.num_qubits > 12:
            raise ValueError("dense form limited to 12 qubits")
        mine = dict(self.factors)
        out = np.array([[1.0 + 0.0j]])
        # Most significant factor first so that bit k of the index is qubit k.
        for q in reversed(range(self.num_qubits)):
            m = _AXIS_MATRIX.get(mine.get(q, ""), PAULI_I)
            out = np.kron(out, m)
        return out


def evolution_matrix(p: PauliString, angle: float) -> np.ndarray:
    """Dense ``exp(i angle P)`` computed from ``P^2 = 1``."""
    mat = p.dense()
    dim = mat.shape[0]
    return math.cos(angle) * np.eye(dim, dtype=complex) + 1j * math.sin(angle) * mat


def symplectic_vector(p: PauliString) -> np.ndarray:
    """GF(2) representation ``[x | z]`` of a Pauli string (length 2n)."""
    v = np.zeros(2 * p.num_qubits, dtype=np.uint8)
    for q, a in p.factors:
        if a in ("X", "Y"):
            v[q] = 1
        if a in ("Z", "Y"):
            v[p.num_qubits + q] = 1
    return v


def gf2_rank(rows: np.ndarray) -> int:
    """Rank of a binary matrix over GF(2)."""
    m = np.array(rows, dtype=np.uint8) % 2
    rank = 0
    ncols = m.shape[1] if m.ndim == 2 and m.size else 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, m.shape[0]):
            if m[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(m.shape[0]):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
        if rank == m.shape[0]:
            break
    return rank


def in_gf2_span(rows: np.ndarray, vector: np.ndarray) -> bool:
    """True when ``vector`` lies in the GF(2) row span of ``rows``."""
    base = gf2_rank(rows)
    aug = np.vstack([rows, vector[None, :]])
    return gf2_rank(aug) == base
