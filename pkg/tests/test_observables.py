"""Tests for observables and expectation values."""

import numpy as np
import pytest

from conftest import embed1, random_density
from noisyvqc.observables import (
    Observable,
    build_custom_hermitian,
    expectation,
    pauli_matrix,
)
from noisyvqc.states import DensityMatrix, ground_state


def test_pauli_matrix_values():
    assert np.array_equal(pauli_matrix("pauli_x"), [[0, 1], [1, 0]])
    assert np.array_equal(pauli_matrix("pauli_y"), [[0, -1j], [1j, 0]])
    assert np.array_equal(pauli_matrix("pauli_z"), [[1, 0], [0, -1]])


def test_pauli_matrix_rejects_unknown_kind():
    with pytest.raises(ValueError, match="expected one of"):
        pauli_matrix("pauli_w")
    with pytest.raises(ValueError, match="expected one of"):
        pauli_matrix("custom_hermitian")


def test_pauli_matrix_returns_fresh_copy():
    a = pauli_matrix("pauli_z")
    a[0, 0] = 7.0
    assert pauli_matrix("pauli_z")[0, 0] == 1.0


def test_custom_hermitian_structure():
    h = build_custom_hermitian(3)
    assert np.array_equal(np.diag(h), [1, 1, 1, 1, 0, 0, 0, 0])
    assert np.count_nonzero(h - np.diag(np.diag(h))) == 0


def test_custom_hermitian_is_qubit0_projector():
    # with qubit 0 as most significant bit, H = |0><0| (x) I on the rest
    for n in (1, 2, 4):
        h = build_custom_hermitian(n)
        proj = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128)
        assert np.array_equal(h, np.kron(proj, np.eye(1 << (n - 1))))


def test_observable_validation():
    with pytest.raises(ValueError, match="unknown observable"):
        Observable("hadamard", 2)
    with pytest.raises(ValueError, match="num_qubits"):
        Observable("pauli_z", 0)


@pytest.mark.parametrize("kind", ["pauli_x", "pauli_y", "pauli_z"])
def test_pauli_expectation_matches_dense_trace(kind):
    n = 3
    rho = DensityMatrix(n, random_density(n, seed=11))
    obs = Observable(kind, n)
    for q in range(n):
        expected = np.trace(rho.matrix @ embed1(pauli_matrix(kind), q, n)).real
        assert abs(expectation(rho, obs, q) - expected) < 1e-12


def test_hermitian_expectation_matches_dense_trace():
    n = 3
    rho = DensityMatrix(n, random_density(n, seed=12))
    obs = Observable("custom_hermitian", n)
    expected = np.trace(rho.matrix @ build_custom_hermitian(n)).real
    assert abs(expectation(rho, obs) - expected) < 1e-12


def test_expectation_on_ground_state():
    rho = ground_state(3)
    for q in range(3):
        assert expectation(rho, Observable("pauli_z", 3), q) == 1.0
        assert expectation(rho, Observable("pauli_x", 3), q) == 0.0
    assert expectation(rho, Observable("custom_hermitian", 3)) == 1.0


def test_expectation_requires_matching_sizes():
    with pytest.raises(ValueError, match="qubits"):
        expectation(ground_state(2), Observable("pauli_z", 3), 0)


def test_pauli_expectation_requires_target_qubit():
    with pytest.raises(ValueError, match="requires a target"):
        expectation(ground_state(2), Observable("pauli_z", 2))
    with pytest.raises(ValueError, match="out of range"):
        expectation(ground_state(2), Observable("pauli_z", 2), 2)


def test_hermitian_expectation_ignores_qubit_argument():
    rho = ground_state(2)
    obs = Observable("custom_hermitian", 2)
    assert expectation(rho, obs, 1) == expectation(rho, obs)
