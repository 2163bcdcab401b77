"""Small-matrix numerical kernels: Hermitian eigensystems, distances, checks."""
from __future__ import annotations

import numpy as np

EIG_MAX_DIM = 4096


def hermitian_eigensystem(m: np.ndarray, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.

    Columns of the returned matrix are the eigenvectors, so ``V @ diag(w) @ V+``
    reconstructs the input.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > EIG_MAX_DIM:
        raise ValueError(f"dimension {m.shape[0]} exceeds limit {EIG_MAX_DIM}")
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(m)
    return w, v


def unitary_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Phase-insensitive distance ``1 - |Tr(U^dagger V)| / d``."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError("shape mismatch")
    d = u.shape[0]
    return 1.0 - abs(np.trace(u.conj().T @ v)) / d


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def check_density_matrix(rho: np.ndarray, tol: float = 1e-10) -> None:
    """Raise when rho is not Hermitian / unit-trace / PSD within tolerance."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(rho).real - 1.0) > max(tol, 1e-10):
        raise ValueError("density matrix trace differs from 1")
    w = np.linalg.eigvalsh(rho)
    if w[0] < -max(tol, 1e-10):
        raise ValueError(f"density matrix has negative eigenvalue {w[0]:.3e}")
