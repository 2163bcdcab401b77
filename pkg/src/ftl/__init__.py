"""Desk-scale simulation toolkit for a periodically driven surface code."""

__version__ = "0.1.0"

from .circuit import Circuit, apply_circuit, circuit_from_text, circuit_to_text, circuit_unitary
from .gates import Gate, euler_decompose
from .lattice import DisorderRealization, Lattice, Plaquette, build_lattice, sample_disorder
from .pauli import PauliString
from .statevector import StateVector, apply_gate, partial_trace, pauli_expectation

__all__ = [
    "Circuit",
    "DisorderRealization",
    "Gate",
    "Lattice",
    "PauliString",
    "Plaquette",
    "StateVector",
    "apply_circuit",
    "apply_gate",
    "build_lattice",
    "circuit_from_text",
    "circuit_to_text",
    "circuit_unitary",
    "euler_decompose",
    "partial_trace",
    "pauli_expectation",
    "sample_disorder",
    "__version__",
]
