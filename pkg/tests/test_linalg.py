"""Tests for the dense linear algebra helpers."""

import numpy as np
import pytest

from noisyvqc.linalg import adjoint, as_matrix, is_hermitian, kron, matmul, trace


def test_as_matrix_coerces_dtype():
    a = as_matrix([[1, 2], [3, 4]])
    assert a.dtype == np.complex128
    assert a.shape == (2, 2)


def test_as_matrix_rejects_wrong_ndim():
    with pytest.raises(ValueError, match="2-D"):
        as_matrix([1, 2, 3])


def test_as_matrix_rejects_nonfinite():
    with pytest.raises(ValueError, match="finite"):
        as_matrix([[1.0, np.inf], [0.0, 1.0]])
    with pytest.raises(ValueError, match="finite"):
        as_matrix([[1.0, np.nan], [0.0, 1.0]])


def test_matmul_hand_value():
    a = [[1, 2], [3, 4]]
    b = [[0, 1], [1, 0]]
    expected = np.array([[2, 1], [4, 3]], dtype=np.complex128)
    assert np.array_equal(matmul(a, b), expected)


def test_matmul_shape_mismatch():
    with pytest.raises(ValueError, match="shape mismatch"):
        matmul(np.eye(2), np.eye(3))


def test_kron_block_ordering():
    # a-major: the left factor indexes the coarse blocks
    a = np.diag([1.0, 2.0])
    out = kron(a, np.eye(2))
    assert np.array_equal(out, np.diag([1.0, 1.0, 2.0, 2.0]).astype(np.complex128))


def test_kron_matches_numpy_on_random_input():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
    b = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    assert np.array_equal(kron(a, b), np.kron(a, b))


def test_adjoint_hand_value():
    a = [[1 + 1j, 2], [3j, 4]]
    expected = np.array([[1 - 1j, -3j], [2, 4]], dtype=np.complex128)
    assert np.array_equal(adjoint(a), expected)


def test_adjoint_returns_fresh_array():
    a = np.eye(2, dtype=np.complex128)
    out = adjoint(a)
    out[0, 0] = 5.0
    assert a[0, 0] == 1.0


def test_trace_value():
    assert trace([[1, 2], [3, 4 + 1j]]) == 5 + 1j


def test_trace_requires_square():
    with pytest.raises(ValueError, match="square"):
        trace(np.ones((2, 3)))


def test_is_hermitian_accepts_hermitian():
    a = np.array([[1.0, 2 - 1j], [2 + 1j, 3.0]])
    assert is_hermitian(a)


def test_is_hermitian_rejects_perturbed():
    a = np.array([[1.0, 2 - 1j], [2 + 1j, 3.0]])
    a[0, 1] += 1e-6
    assert not is_hermitian(a)
    assert is_hermitian(a, tol=1e-5)


def test_is_hermitian_requires_square():
    with pytest.raises(ValueError, match="square"):
        is_hermitian(np.ones((2, 3)))


def test_is_hermitian_rejects_negative_tol():
    with pytest.raises(ValueError, match="nonnegative"):
        is_hermitian(np.eye(2), tol=-1.0)
