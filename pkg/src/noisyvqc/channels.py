"""Single-qubit Kraus noise channels: amplitude damping, phase damping, phase flip.

Each factory returns an immutable channel whose operators satisfy the CPTP
completeness relation sum_i K_i^dagger K_i = I within 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "KrausChannel",
    "amplitude_damping",
    "phase_damping",
    "phase_flip",
    "validate_cptp",
    "channel_from_name",
    "CHANNEL_NAMES",
]

CHANNEL_NAMES = ("amplitude_damping", "phase_damping", "phase_flip")


@dataclass(frozen=True)
class KrausChannel:
    """Named single-qubit channel: ordered 2x2 Kraus operators and a probability."""

    name: str
    probability: float
    operators: tuple = field(repr=False)

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"probability must be in [0, 1], got {self.probability}")
        if not self.operators:
            raise ValueError("channel needs at least one Kraus operator")
        ops = tuple(np.asarray(k, dtype=np.complex128) for k in self.operators)
        for k in ops:
            if k.shape != (2, 2):
                raise ValueError(f"Kraus operators must be 2x2, got shape {k.shape}")
        object.__setattr__(self, "operators", ops)


def _check_probability(p: float, what: str) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{what} must be in [0, 1], got {p}")
    return p


def amplitude_damping(gamma: float) -> KrausChannel:
    """Energy decay |1> -> |0> with probability gamma.

    K0 = [[1, 0], [0, sqrt(1-gamma)]]
    K1 = [[0, sqrt(gamma)], [0, 0]]
    """
    gamma = _check_probability(gamma, "gamma")
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=np.complex128)
    k1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
    return KrausChannel("amplitude_damping", gamma, (k0, k1))


def phase_damping(gamma: float) -> KrausChannel:
    """Coherence decay without population change, strength gamma.

    K0 = [[1, 0], [0, sqrt(1-gamma)]]
    K1 = [[0, 0], [0, sqrt(gamma)]]
    """
    gamma = _check_probability(gamma, "gamma")
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=np.complex128)
    k1 = np.array([[0.0, 0.0], [0.0, math.sqrt(gamma)]], dtype=np.complex128)
    return KrausChannel("phase_damping", gamma, (k0, k1))


def phase_flip(p: float) -> KrausChannel:
    """Z applied with probability p.

    K0 = sqrt(1-p) I
    K1 = sqrt(p) Z
    """
    p = _check_probability(p, "p")
    k0 = math.sqrt(1.0 - p) * np.eye(2, dtype=np.complex128)
    k1 = math.sqrt(p) * np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
    return KrausChannel("phase_flip", p, (k0, k1))


def validate_cptp(channel: KrausChannel, tol: float = 1e-12) -> bool:
    """True iff max-entry |sum_i K_i^dagger K_i - I| <= tol."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    if not channel.operators:
        raise ValueError("channel has no Kraus operators")
    acc = np.zeros((2, 2), dtype=np.complex128)
    for k in channel.operators:
        acc += k.conj().T @ k
    return bool(np.max(np.abs(acc - np.eye(2))) <= tol)


_FACTORIES = {
    "amplitude_damping": amplitude_damping,
    "phase_damping": phase_damping,
    "phase_flip": phase_flip,
}


def channel_from_name(name: str, probability: float):
    """Build a channel from its config name; "none" gives None (no channel)."""
    if name == "none":
        return None
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise ValueError(
            f"unknown channel {name!r}; expected one of {CHANNEL_NAMES + ('none',)}"
        ) from None
    return factory(probability)
