"""Hardware-efficient layered ansatz: per-qubit Rx then Ry rotations followed by
a chain of nearest-neighbor CZ gates, repeated for a configured number of layers.

Parameter layout: index(l, i, g) = l*2n + 2i + g with g=0 for the Rx angle and
g=1 for the Ry angle of qubit i in layer l.

Noise insertion policies:
  per_gate  - the channel acts on every qubit a gate touches, right after it
  per_layer - the channel acts once on every qubit at the end of each layer
  none      - noiseless evolution
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .channels import KrausChannel, validate_cptp
from .states import (
    DensityMatrix,
    _channel_rho_inplace,
    _conj_rho_1q_inplace,
    _cz_rho_inplace,
    ground_state,
)

__all__ = [
    "GateSpec",
    "Ansatz",
    "NOISE_POLICIES",
    "build_ansatz",
    "rotation_matrix",
    "random_parameters",
    "evolve",
]

NOISE_POLICIES = ("per_gate", "per_layer", "none")

ROTATION_KINDS = ("rx", "ry")


@dataclass(frozen=True)
class GateSpec:
    """One gate: rx/ry on a single qubit with a parameter slot, or cz on a pair."""

    kind: str
    qubits: tuple
    param_index: int | None = None

    def __post_init__(self):
        if self.kind in ROTATION_KINDS:
            if len(self.qubits) != 1 or self.param_index is None:
                raise ValueError(f"{self.kind} gate needs one qubit and a param_index")
        elif self.kind == "cz":
            if len(self.qubits) != 2 or self.qubits[1] != self.qubits[0] + 1:
                raise ValueError("cz acts on an adjacent pair (j, j+1)")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")


@dataclass(frozen=True)
class Ansatz:
    """Layered gate program with a fixed parameter layout and noise policy."""

    num_qubits: int
    num_layers: int
    gates: tuple
    noise_policy: str
    layer_ends: tuple

    @property
    def num_parameters(self) -> int:
        return 2 * self.num_qubits * self.num_layers

    @property
    def single_qubit_gate_count(self) -> int:
        return sum(1 for g in self.gates if g.kind in ROTATION_KINDS)

    @property
    def two_qubit_gate_count(self) -> int:
        return sum(1 for g in self.gates if g.kind == "cz")

    @cached_property
    def _layer_end_set(self) -> frozenset:
        return frozenset(self.layer_ends)


def build_ansatz(n: int, num_layers: int, noise_policy: str = "per_gate") -> Ansatz:
    """Construct the circuit: per layer, Rx then Ry on each qubit, then the CZ chain."""
    if n < 2:
        raise ValueError(f"need at least 2 qubits for the CZ chain, got {n}")
    if num_layers < 1:
        raise ValueError(f"num_layers must be >= 1, got {num_layers}")
    if noise_policy not in NOISE_POLICIES:
        raise ValueError(f"noise_policy must be one of {NOISE_POLICIES}")
    gates = []
    layer_ends = []
    for layer in range(num_layers):
        base = layer * 2 * n
        for i in range(n):
            gates.append(GateSpec("rx", (i,), base + 2 * i))
            gates.append(GateSpec("ry", (i,), base + 2 * i + 1))
        for j in range(n - 1):
            gates.append(GateSpec("cz", (j, j + 1)))
        layer_ends.append(len(gates) - 1)
    return Ansatz(n, num_layers, tuple(gates), noise_policy, tuple(layer_ends))


def rotation_matrix(kind: str, angle: float) -> np.ndarray:
    """Half-angle rotation gate Rx or Ry."""
    c = math.cos(angle / 2.0)
    s = math.sin(angle / 2.0)
    if kind == "rx":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    if kind == "ry":
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    raise ValueError(f"expected 'rx' or 'ry', got {kind!r}")


def random_parameters(n: int, num_layers: int, seed: int) -> np.ndarray:
    """Deterministic i.i.d. uniform draw on the open interval (-pi, pi).

    Counter-based generator keyed by seed: same seed gives the same vector
    bit for bit.
    """
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")
    count = 2 * n * num_layers
    gen = np.random.Generator(np.random.Philox(seed))
    vals = gen.uniform(-np.pi, np.pi, size=count)
    # uniform() includes its low endpoint; fold the endpoints inward so the
    # interval is strictly open on both sides
    lo = np.nextafter(-np.pi, 0.0)
    hi = np.nextafter(np.pi, 0.0)
    return np.clip(vals, lo, hi)


def _check_args(ansatz: Ansatz, params: np.ndarray, channel) -> np.ndarray:
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (ansatz.num_parameters,):
        raise ValueError(
            f"expected {ansatz.num_parameters} parameters, got shape {params.shape}"
        )
    if ansatz.noise_policy == "none":
        if channel is not None:
            raise ValueError("noise_policy is 'none' but a channel was provided")
    else:
        if channel is None:
            raise ValueError(f"noise_policy {ansatz.noise_policy!r} requires a channel")
        if not isinstance(channel, KrausChannel) or not validate_cptp(channel, 1e-10):
            raise ValueError("channel fails CPTP validation")
    return params


def _apply_block(rho: np.ndarray, scratch: np.ndarray, ansatz: Ansatz, j: int,
                 params: np.ndarray, channel,
                 override_angle: float | None = None) -> None:
    """Apply gate j plus the noise it triggers under the ansatz policy.

    Mutates rho in place; scratch is a same-shaped work buffer whose content
    is meaningless afterwards.
    """
    g = ansatz.gates[j]
    n = ansatz.num_qubits
    per_gate = channel is not None and ansatz.noise_policy == "per_gate"
    if g.kind == "cz":
        _cz_rho_inplace(rho, g.qubits[0], g.qubits[1], n)
        if per_gate:
            _channel_rho_inplace(rho, channel, g.qubits[0], n)
            _channel_rho_inplace(rho, channel, g.qubits[1], n)
    else:
        angle = params[g.param_index] if override_angle is None else override_angle
        _conj_rho_1q_inplace(rho, scratch, rotation_matrix(g.kind, angle),
                             g.qubits[0], n)
        if per_gate:
            _channel_rho_inplace(rho, channel, g.qubits[0], n)
    if (channel is not None and ansatz.noise_policy == "per_layer"
            and j in ansatz._layer_end_set):
        for q in range(n):
            _channel_rho_inplace(rho, channel, q, n)


def evolve(ansatz: Ansatz, params, channel: KrausChannel | None = None) -> DensityMatrix:
    """Run the circuit on the ground state and return the final density matrix."""
    params = _check_args(ansatz, params, channel)
    rho = ground_state(ansatz.num_qubits).matrix
    scratch = np.empty_like(rho)
    for j in range(len(ansatz.gates)):
        _apply_block(rho, scratch, ansatz, j, params, channel)
    return DensityMatrix(ansatz.num_qubits, rho)
