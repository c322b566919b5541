"""Minimal complex dense linear algebra used by every other module.

Matrices are 2-D ``numpy.ndarray`` values of dtype complex128, row major.
All operations allocate fresh outputs; inputs are never mutated.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "as_matrix",
    "matmul",
    "kron",
    "adjoint",
    "trace",
    "is_hermitian",
]


def as_matrix(values) -> np.ndarray:
    """Coerce to a 2-D complex128 array and check that every entry is finite."""
    a = np.asarray(values, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def matmul(a, b) -> np.ndarray:
    """Matrix product a @ b."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch for matmul: {a.shape} x {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker product with a-major block ordering."""
    return np.kron(as_matrix(a), as_matrix(b))


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T.copy()


def trace(a) -> complex:
    """Sum of diagonal entries of a square matrix."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"trace requires a square matrix, got {a.shape}")
    return complex(np.trace(a))


def is_hermitian(a, tol: float = 1e-10) -> bool:
    """True iff max |a - a^dagger| entry is at most tol."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"hermiticity check requires a square matrix, got {a.shape}")
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)
