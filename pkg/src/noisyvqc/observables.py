"""Measurement observables and exact expectation values.

Supported kinds: single-qubit Paulis (applied per qubit, identity elsewhere)
and the custom block Hermitian H, the 2**n x 2**n diagonal matrix whose first
2**(n-1) diagonal entries are 1.  With qubit 0 as the most significant bit,
H equals kron(|0><0|, I) and its expectation is the probability that qubit 0
measures |0>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import MAX_QUBITS, DensityMatrix

__all__ = [
    "Observable",
    "PAULI_KINDS",
    "OBSERVABLE_KINDS",
    "pauli_matrix",
    "build_custom_hermitian",
    "expectation",
]

PAULI_KINDS = ("pauli_x", "pauli_y", "pauli_z")
OBSERVABLE_KINDS = PAULI_KINDS + ("custom_hermitian",)

_PAULI = {
    "pauli_x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128),
    "pauli_y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128),
    "pauli_z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128),
}


@dataclass(frozen=True)
class Observable:
    """Observable family: a Pauli kind measured per qubit, or the custom H."""

    kind: str
    num_qubits: int

    def __post_init__(self):
        if self.kind not in OBSERVABLE_KINDS:
            raise ValueError(f"unknown observable kind {self.kind!r}")
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}]")


def pauli_matrix(kind: str) -> np.ndarray:
    """The standard 2x2 matrix for a Pauli kind."""
    if kind not in PAULI_KINDS:
        raise ValueError(f"expected one of {PAULI_KINDS}, got {kind!r}")
    return _PAULI[kind].copy()


def build_custom_hermitian(n: int) -> np.ndarray:
    """Diagonal 2**n x 2**n matrix with 1 on the first 2**(n-1) diagonal entries."""
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"n must be in [1, {MAX_QUBITS}], got {n}")
    dim = 1 << n
    h = np.zeros((dim, dim), dtype=np.complex128)
    idx = np.arange(dim // 2)
    h[idx, idx] = 1.0
    return h


def expectation(rho: DensityMatrix, obs: Observable, q: int | None = None) -> float:
    """Tr(rho O) for the embedded operator; imaginary residue below 1e-10 is dropped.

    Pauli kinds require the target qubit q; custom_hermitian ignores q.
    Diagonal observables read only rho's diagonal; X and Y read the index
    pairs (r, r ^ m) coupled by the embedded operator.
    """
    if obs.num_qubits != rho.num_qubits:
        raise ValueError(
            f"observable is for {obs.num_qubits} qubits, state has {rho.num_qubits}"
        )
    n = rho.num_qubits
    m = rho.matrix
    if obs.kind == "custom_hermitian":
        return float(np.sum(m.diagonal()[: (1 << n) // 2]).real)
    if q is None:
        raise ValueError(f"observable kind {obs.kind!r} requires a target qubit")
    if not 0 <= q < n:
        raise ValueError(f"qubit index {q} out of range for {n} qubits")
    d = 1 << n
    if obs.kind == "pauli_z":
        diag = m.diagonal().real.reshape(1 << q, 2, -1)
        return float(np.sum(diag[:, 0, :]) - np.sum(diag[:, 1, :]))
    rows = np.arange(d)
    mask = 1 << (n - 1 - q)
    pairs = m[rows, rows ^ mask]
    if obs.kind == "pauli_x":
        return float(np.sum(pairs).real)
    # pauli_y: Tr(rho Y_q) = sum_r rho[r, r^m] * (i if bit_q(r) == 0 else -i)
    signs = 1 - 2 * ((rows & mask) > 0)
    return float((1j * np.sum(signs * pairs)).real)
