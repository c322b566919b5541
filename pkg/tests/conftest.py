"""Shared oracle helpers for the test suite.

The embedding oracles build full 2**n x 2**n matrices by explicit bit
arithmetic, independently of the index kernels under test.
"""

import numpy as np


def embed1(u, q, n):
    """Dense embedding of a 2x2 operator at qubit q (qubit 0 = most significant)."""
    u = np.asarray(u, dtype=np.complex128)
    dim = 1 << n
    mask = 1 << (n - 1 - q)
    full = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        cin = 1 if col & mask else 0
        base = col & ~mask
        for rout in range(2):
            row = base | (mask if rout else 0)
            full[row, col] += u[rout, cin]
    return full


def embed2(u, q1, q2, n):
    """Dense embedding of a 4x4 operator at (q1, q2) with q1 the high-order index."""
    u = np.asarray(u, dtype=np.complex128)
    dim = 1 << n
    m1 = 1 << (n - 1 - q1)
    m2 = 1 << (n - 1 - q2)
    full = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        cin = 2 * (1 if col & m1 else 0) + (1 if col & m2 else 0)
        base = col & ~m1 & ~m2
        for rout in range(4):
            row = base | (m1 if rout & 2 else 0) | (m2 if rout & 1 else 0)
            full[row, col] += u[rout, cin]
    return full


def random_unitary(dim, seed):
    """Haar-ish unitary from the QR decomposition of a complex Gaussian matrix."""
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(n, seed):
    """Random mixed state: normalized A A^dagger, so Hermitian PSD with trace 1."""
    rng = np.random.default_rng(seed)
    dim = 1 << n
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real
