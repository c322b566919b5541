"""Cost functions, parameter-shift and finite-difference gradients, the Adam
training loop, and the barren-plateau gradient-variance probe.

Cost conventions (value in [0, 1], smaller is better):
  custom_hermitian: C = 1 - <H>
  Pauli kind P:     C = 1 - (1/n) sum_i (1 + <P_i>) / 2
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ansatz import Ansatz, _apply_block, _check_args, evolve, random_parameters
from .observables import PAULI_KINDS, Observable, expectation
from .states import DensityMatrix, ground_state

__all__ = [
    "CostSpec",
    "AdamState",
    "TrainingTrace",
    "cost",
    "gradient_parameter_shift",
    "gradient_finite_difference",
    "adam_step",
    "train",
    "bp_variance_probe",
]

_HALF_PI = math.pi / 2.0

REDUCTIONS = ("mean_qubit_prob0", "direct")


@dataclass(frozen=True)
class CostSpec:
    """Pairs an observable with the reduction that turns expectations into a cost."""

    observable: Observable
    reduction: str

    def __post_init__(self):
        if self.reduction not in REDUCTIONS:
            raise ValueError(f"unknown reduction {self.reduction!r}")
        is_pauli = self.observable.kind in PAULI_KINDS
        if is_pauli and self.reduction != "mean_qubit_prob0":
            raise ValueError("Pauli observables use the mean_qubit_prob0 reduction")
        if not is_pauli and self.reduction != "direct":
            raise ValueError("custom_hermitian uses the direct reduction")

    @classmethod
    def for_observable(cls, obs: Observable) -> "CostSpec":
        red = "mean_qubit_prob0" if obs.kind in PAULI_KINDS else "direct"
        return cls(obs, red)


def cost(rho: DensityMatrix, spec: CostSpec) -> float:
    """Evaluate the cost of a state under the spec's observable and reduction."""
    obs = spec.observable
    if obs.num_qubits != rho.num_qubits:
        raise ValueError(
            f"cost spec is for {obs.num_qubits} qubits, state has {rho.num_qubits}"
        )
    if spec.reduction == "direct":
        return 1.0 - expectation(rho, obs)
    n = rho.num_qubits
    total = 0.0
    for i in range(n):
        total += (1.0 + expectation(rho, obs, i)) / 2.0
    return 1.0 - total / n


def _cost_and_gradient(ansatz: Ansatz, params, spec: CostSpec, channel):
    """Cost and full parameter-shift gradient in one pass.

    Walks the circuit once, keeping the prefix state up to each parameterized
    gate; each shifted branch copies the prefix and replays only the suffix.
    The arithmetic is identical to evaluating the shifted circuits from
    scratch, so the result matches the naive rule bit for bit.
    """
    params = _check_args(ansatz, params, channel)
    n = ansatz.num_qubits
    num_gates = len(ansatz.gates)
    grad = np.zeros(ansatz.num_parameters)
    rho = ground_state(n).matrix
    scratch = np.empty_like(rho)
    for j, gate in enumerate(ansatz.gates):
        if gate.param_index is not None:
            k = gate.param_index
            shifted = []
            for delta in (_HALF_PI, -_HALF_PI):
                r = rho.copy()
                _apply_block(r, scratch, ansatz, j, params, channel,
                             override_angle=params[k] + delta)
                for j2 in range(j + 1, num_gates):
                    _apply_block(r, scratch, ansatz, j2, params, channel)
                shifted.append(cost(DensityMatrix(n, r), spec))
            grad[k] = (shifted[0] - shifted[1]) / 2.0
        _apply_block(rho, scratch, ansatz, j, params, channel)
    return cost(DensityMatrix(n, rho), spec), grad


def gradient_parameter_shift(ansatz: Ansatz, params, spec: CostSpec,
                             channel=None) -> np.ndarray:
    """dC/dp_k = [C(p + pi/2 e_k) - C(p - pi/2 e_k)] / 2 for every parameter."""
    return _cost_and_gradient(ansatz, params, spec, channel)[1]


def gradient_finite_difference(ansatz: Ansatz, params, spec: CostSpec,
                               channel=None, h: float = 1e-5) -> np.ndarray:
    """Central differences [C(p + h e_k) - C(p - h e_k)] / 2h."""
    if h <= 0:
        raise ValueError(f"h must be positive, got {h}")
    params = _check_args(ansatz, params, channel)
    grad = np.zeros(ansatz.num_parameters)
    for k in range(ansatz.num_parameters):
        plus = params.copy()
        plus[k] = params[k] + h
        minus = params.copy()
        minus[k] = params[k] - h
        c_plus = cost(evolve(ansatz, plus, channel), spec)
        c_minus = cost(evolve(ansatz, minus, channel), spec)
        grad[k] = (c_plus - c_minus) / (2.0 * h)
    return grad


@dataclass(frozen=True)
class AdamState:
    """Adam moment estimates and hyperparameters; moments start at zero."""

    first_moment: np.ndarray
    second_moment: np.ndarray
    step_count: int
    learning_rate: float
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    @classmethod
    def initial(cls, num_params: int, learning_rate: float = 0.1,
                beta1: float = 0.9, beta2: float = 0.999,
                epsilon: float = 1e-8) -> "AdamState":
        zeros = np.zeros(num_params)
        return cls(zeros, zeros.copy(), 0, learning_rate, beta1, beta2, epsilon)


def adam_step(state: AdamState, params, grads):
    """One bias-corrected Adam update; returns (new_state, new_params)."""
    params = np.asarray(params, dtype=np.float64)
    grads = np.asarray(grads, dtype=np.float64)
    if params.shape != grads.shape or params.shape != state.first_moment.shape:
        raise ValueError("params, grads, and moments must have matching shapes")
    b1, b2 = state.beta1, state.beta2
    m = b1 * state.first_moment + (1.0 - b1) * grads
    v = b2 * state.second_moment + (1.0 - b2) * grads * grads
    t = state.step_count + 1
    m_hat = m / (1.0 - b1 ** t)
    v_hat = v / (1.0 - b2 ** t)
    new_params = params - state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)
    new_state = AdamState(m, v, t, state.learning_rate, b1, b2, state.epsilon)
    return new_state, new_params


@dataclass(frozen=True)
class TrainingTrace:
    """Per-iteration cost and gradient-norm record for one training run."""

    fingerprint: str
    costs: np.ndarray
    grad_norms: np.ndarray
    final_parameters: np.ndarray

    @property
    def iterations(self) -> int:
        return len(self.costs) - 1

    @property
    def final_cost(self) -> float:
        return float(self.costs[-1])

    @property
    def cost_decrease(self) -> float:
        return float(self.costs[0] - self.costs[-1])


def _fingerprint(ansatz: Ansatz, spec: CostSpec, channel, seed: int,
                 iterations: int, learning_rate: float) -> str:
    noise = "none" if channel is None else f"{channel.name}:{channel.probability!r}"
    return (
        f"n={ansatz.num_qubits};layers={ansatz.num_layers};"
        f"obs={spec.observable.kind};noise={noise};policy={ansatz.noise_policy};"
        f"seed={seed};iterations={iterations};lr={learning_rate!r}"
    )


def train(ansatz: Ansatz, spec: CostSpec, channel=None, seed: int = 0,
          iterations: int = 50, learning_rate: float = 0.1) -> TrainingTrace:
    """Adam-optimize the circuit parameters from a seeded random start.

    Records the cost and gradient norm before the first step and after every
    step: iterations+1 entries in total.
    """
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    params = random_parameters(ansatz.num_qubits, ansatz.num_layers, seed)
    state = AdamState.initial(ansatz.num_parameters, learning_rate)
    costs = np.zeros(iterations + 1)
    norms = np.zeros(iterations + 1)
    for it in range(iterations):
        c, grad = _cost_and_gradient(ansatz, params, spec, channel)
        costs[it] = c
        norms[it] = np.linalg.norm(grad)
        state, params = adam_step(state, params, grad)
    c, grad = _cost_and_gradient(ansatz, params, spec, channel)
    costs[iterations] = c
    norms[iterations] = np.linalg.norm(grad)
    fp = _fingerprint(ansatz, spec, channel, seed, iterations, learning_rate)
    return TrainingTrace(fp, costs, norms, params)


def bp_variance_probe(ansatz: Ansatz, spec: CostSpec, channel=None,
                      num_samples: int = 200, seed: int = 0,
                      param_index: int = 0) -> float:
    """Sample variance of dC/dp_{param_index} over random parameter draws.

    Draw k uses the seeded generator at seed+k, so the schedule is fully
    deterministic for a given (seed, num_samples).
    """
    if num_samples < 2:
        raise ValueError(f"num_samples must be >= 2, got {num_samples}")
    if not 0 <= param_index < ansatz.num_parameters:
        raise ValueError(f"param_index {param_index} out of range")
    grads = np.zeros(num_samples)
    for k in range(num_samples):
        params = random_parameters(ansatz.num_qubits, ansatz.num_layers, seed + k)
        plus = params.copy()
        plus[param_index] = params[param_index] + _HALF_PI
        minus = params.copy()
        minus[param_index] = params[param_index] - _HALF_PI
        c_plus = cost(evolve(ansatz, plus, channel), spec)
        c_minus = cost(evolve(ansatz, minus, channel), spec)
        grads[k] = (c_plus - c_minus) / 2.0
    return float(np.var(grads, ddof=1))
