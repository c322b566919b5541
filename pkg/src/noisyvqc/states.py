"""Statevector and density-matrix states with qubit-targeted operator application.

Qubit 0 is the most significant bit of the computational-basis index:
basis index b = sum_i q_i * 2**(n-1-i).  A density matrix for n qubits is a
2**n x 2**n complex array whose flat row-major index space has 2n bits, the
first n addressing the row and the last n the column.

Operators are embedded by index arithmetic over the 2**n space; the full
2**n x 2**n unitary is never materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import KrausChannel, validate_cptp

__all__ = [
    "StateVector",
    "DensityMatrix",
    "ground_state",
    "apply_single_qubit_unitary",
    "apply_two_qubit_unitary",
    "apply_kraus",
    "from_statevector",
    "statevector_apply",
    "set_strict_validation",
    "strict_validation_enabled",
]

MAX_QUBITS = 12

_strict = False


def set_strict_validation(enabled: bool) -> None:
    """Toggle O(4**n) trace/Hermiticity checks after each public operation."""
    global _strict
    _strict = bool(enabled)


def strict_validation_enabled() -> bool:
    return _strict


@dataclass(frozen=True)
class StateVector:
    """Pure state: 2**num_qubits complex amplitudes with unit norm."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}], got {self.num_qubits}")
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise ValueError(
                f"expected {1 << self.num_qubits} amplitudes, got shape {self.amplitudes.shape}"
            )


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed state: 2**num_qubits square complex matrix, Hermitian, unit trace."""

    num_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        dim = 1 << self.num_qubits
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}], got {self.num_qubits}")
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got shape {self.matrix.shape}")

    @property
    def dimension(self) -> int:
        return 1 << self.num_qubits


def _check_qubit(q: int, n: int) -> None:
    if not 0 <= q < n:
        raise ValueError(f"qubit index {q} out of range for {n} qubits")


def _check_unitary(u: np.ndarray, dim: int, tol: float = 1e-10) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix, got shape {u.shape}")
    if np.max(np.abs(u @ u.conj().T - np.eye(dim))) > tol:
        raise ValueError("matrix is not unitary")
    return u


def _check_state(rho: np.ndarray, where: str, tol: float = 1e-9) -> None:
    if abs(np.trace(rho).real - 1.0) > tol or abs(np.trace(rho).imag) > tol:
        raise ValueError(f"{where}: trace deviates from 1 beyond {tol}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError(f"{where}: state is not Hermitian within {tol}")


# ---------------------------------------------------------------------------
# flat-index kernels (private, shared with the ansatz evolution loop)

def _apply_matrix_bit(flat: np.ndarray, u: np.ndarray, bit: int, nbits: int,
                      out: np.ndarray | None = None) -> np.ndarray:
    """Contract a 2x2 matrix along one bit axis of a flat 2**nbits array.

    Writes into `out` when given (which must not alias `flat`), else into a
    fresh array; returns the destination.
    """
    lead = 1 << bit
    trail = 1 << (nbits - bit - 1)
    if out is None:
        out = np.empty_like(flat)
    if trail == 1:
        np.matmul(flat.reshape(lead, 2), u.T, out=out.reshape(lead, 2))
    elif trail <= 4:
        # tiny trailing blocks make the broadcast path degenerate into many
        # small products; fold the trail into the operator and use one GEMM
        uk = np.kron(u, np.eye(trail)).T.copy()
        np.matmul(flat.reshape(lead, 2 * trail), uk, out=out.reshape(lead, 2 * trail))
    else:
        np.matmul(u, flat.reshape(lead, 2, trail), out=out.reshape(lead, 2, trail))
    return out


def _apply_matrix_bits2(flat: np.ndarray, u: np.ndarray, b1: int, b2: int, nbits: int) -> np.ndarray:
    """Contract a 4x4 matrix along two bit axes (b1 high order) of a flat array."""
    t = flat.reshape((2,) * nbits)
    t = np.moveaxis(t, (b1, b2), (0, 1))
    out = np.tensordot(u.reshape(2, 2, 2, 2), t, axes=([2, 3], [0, 1]))
    out = np.moveaxis(out, (0, 1), (b1, b2))
    return out.reshape(flat.shape)


def _conj_rho_1q(rho: np.ndarray, u: np.ndarray, q: int, n: int) -> np.ndarray:
    """rho -> U_q rho U_q^dagger for a 2x2 operator, returning a fresh array."""
    flat = _apply_matrix_bit(rho.reshape(-1), u, q, 2 * n)
    flat = _apply_matrix_bit(flat, np.conj(u), n + q, 2 * n)
    return flat.reshape(rho.shape)


def _conj_rho_1q_inplace(rho: np.ndarray, scratch: np.ndarray, u: np.ndarray,
                         q: int, n: int) -> None:
    """In-place U_q rho U_q^dagger using a caller-owned scratch buffer.

    Same contraction sequence as _conj_rho_1q, so results agree bit for bit.
    """
    flat = rho.reshape(-1)
    buf = scratch.reshape(-1)
    _apply_matrix_bit(flat, u, q, 2 * n, out=buf)
    _apply_matrix_bit(buf, np.conj(u), n + q, 2 * n, out=flat)


def _conj_rho_2q(rho: np.ndarray, u: np.ndarray, q1: int, q2: int, n: int) -> np.ndarray:
    """rho -> U rho U^dagger for a 4x4 operator embedded at (q1, q2)."""
    flat = _apply_matrix_bits2(rho.reshape(-1), u, q1, q2, 2 * n)
    flat = _apply_matrix_bits2(flat, np.conj(u), n + q1, n + q2, 2 * n)
    return flat.reshape(rho.shape)


def _cz_state_inplace(flat: np.ndarray, q1: int, q2: int, n: int) -> None:
    """Negate amplitudes whose q1 and q2 bits are both 1."""
    a, b = sorted((q1, q2))
    v = flat.reshape(1 << a, 2, 1 << (b - a - 1), 2, -1)
    v[:, 1, :, 1, :] *= -1.0


def _cz_rho_inplace(rho: np.ndarray, q1: int, q2: int, n: int) -> None:
    """Conjugate rho by CZ at (q1, q2) via sign flips on rows then columns."""
    dim = 1 << n
    a, b = sorted((q1, q2))
    vr = rho.reshape(1 << a, 2, 1 << (b - a - 1), 2, -1)
    vr[:, 1, :, 1, :] *= -1.0
    vc = rho.reshape(dim << a, 2, 1 << (b - a - 1), 2, 1 << (n - b - 1))
    vc[:, 1, :, 1, :] *= -1.0


def _kraus_rho(rho: np.ndarray, operators, q: int, n: int) -> np.ndarray:
    """Generic channel action sum_i K_i rho K_i^dagger, returning a fresh array."""
    flat = rho.reshape(-1)
    acc = np.zeros_like(flat)
    for k in operators:
        t = _apply_matrix_bit(flat, k, q, 2 * n)
        t = _apply_matrix_bit(t, np.conj(k), n + q, 2 * n)
        acc += t
    return acc.reshape(rho.shape)


def _channel_rho_inplace(rho: np.ndarray, channel: KrausChannel, q: int, n: int) -> None:
    """Apply a named channel in place via its closed-form action on the qubit blocks.

    Writing the four blocks of rho with respect to qubit q's row/column bits as
    r00, r01, r10, r11, the named channels act as

      phase_damping(g):     r01, r10 *= sqrt(1-g)
      phase_flip(p):        r01, r10 *= 1-2p
      amplitude_damping(g): r00 += g*r11; r01, r10 *= sqrt(1-g); r11 *= 1-g

    which is algebraically identical to the generic Kraus sum.
    """
    p = channel.probability
    lead = 1 << q
    trail = 1 << (n - q - 1)
    v = rho.reshape(lead, 2, trail, lead, 2, trail)
    if channel.name == "phase_damping":
        s = math.sqrt(1.0 - p)
        v[:, 0, :, :, 1, :] *= s
        v[:, 1, :, :, 0, :] *= s
    elif channel.name == "phase_flip":
        f = 1.0 - 2.0 * p
        v[:, 0, :, :, 1, :] *= f
        v[:, 1, :, :, 0, :] *= f
    elif channel.name == "amplitude_damping":
        s = math.sqrt(1.0 - p)
        v[:, 0, :, :, 0, :] += p * v[:, 1, :, :, 1, :]
        v[:, 0, :, :, 1, :] *= s
        v[:, 1, :, :, 0, :] *= s
        v[:, 1, :, :, 1, :] *= 1.0 - p
    else:
        rho[...] = _kraus_rho(rho, channel.operators, q, n)


# ---------------------------------------------------------------------------
# public operations

def ground_state(n: int) -> DensityMatrix:
    """|0...0><0...0| on n qubits."""
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"n must be in [1, {MAX_QUBITS}], got {n}")
    dim = 1 << n
    rho = np.zeros((dim, dim), dtype=np.complex128)
    rho[0, 0] = 1.0
    return DensityMatrix(n, rho)


def apply_single_qubit_unitary(rho: DensityMatrix, u, q: int) -> DensityMatrix:
    """rho -> (U_q) rho (U_q)^dagger with u embedded at qubit q."""
    n = rho.num_qubits
    _check_qubit(q, n)
    u = _check_unitary(u, 2)
    out = _conj_rho_1q(rho.matrix, u, q, n)
    if _strict:
        _check_state(out, "apply_single_qubit_unitary")
    return DensityMatrix(n, out)


def apply_two_qubit_unitary(rho: DensityMatrix, u, q1: int, q2: int) -> DensityMatrix:
    """Conjugation by a 4x4 unitary embedded at (q1, q2), q1 the high-order index."""
    n = rho.num_qubits
    _check_qubit(q1, n)
    _check_qubit(q2, n)
    if q1 == q2:
        raise ValueError("q1 and q2 must be distinct")
    u = _check_unitary(u, 4)
    out = _conj_rho_2q(rho.matrix, u, q1, q2, n)
    if _strict:
        _check_state(out, "apply_two_qubit_unitary")
    return DensityMatrix(n, out)


def apply_kraus(rho: DensityMatrix, channel: KrausChannel, q: int) -> DensityMatrix:
    """rho -> sum_i (K_i)_q rho (K_i)_q^dagger for a validated channel."""
    n = rho.num_qubits
    _check_qubit(q, n)
    if not validate_cptp(channel, 1e-10):
        raise ValueError(f"channel {channel.name!r} fails CPTP validation")
    out = _kraus_rho(rho.matrix, channel.operators, q, n)
    if _strict:
        _check_state(out, "apply_kraus")
    return DensityMatrix(n, out)


def from_statevector(psi: StateVector) -> DensityMatrix:
    """rho = |psi><psi|."""
    amp = psi.amplitudes
    norm = np.linalg.norm(amp)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"statevector is not normalized: |psi| = {norm}")
    return DensityMatrix(psi.num_qubits, np.outer(amp, amp.conj()))


def statevector_apply(psi: StateVector, u, qubits) -> StateVector:
    """Apply a 2x2 or 4x4 unitary to the given qubit(s) of a pure state.

    For two qubits the first index in `qubits` is the high-order index of
    u's 4-dimensional space.
    """
    n = psi.num_qubits
    qubits = list(qubits)
    for q in qubits:
        _check_qubit(q, n)
    if len(qubits) == 1:
        u = _check_unitary(u, 2)
        out = _apply_matrix_bit(psi.amplitudes, u, qubits[0], n)
    elif len(qubits) == 2:
        if qubits[0] == qubits[1]:
            raise ValueError("qubit indices must be distinct")
        u = _check_unitary(u, 4)
        out = _apply_matrix_bits2(psi.amplitudes, u, qubits[0], qubits[1], n)
    else:
        raise ValueError(f"expected 1 or 2 target qubits, got {len(qubits)}")
    if _strict and abs(np.linalg.norm(out) - 1.0) > 1e-9:
        raise ValueError("statevector_apply: output norm deviates from 1")
    return StateVector(n, out)
