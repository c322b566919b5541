"""2-D cost-landscape scans over a pair of circuit parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ansatz import Ansatz, evolve, random_parameters
from .trainer import CostSpec, cost

__all__ = ["LandscapeGrid", "scan", "flatness", "grid_to_csv", "write_csv"]


@dataclass(frozen=True)
class LandscapeGrid:
    """Cost samples on a resolution x resolution grid over two parameters.

    costs[i, j] is the cost with parameter axis1_index set to axis_values[i]
    and axis2_index set to axis_values[j], all other parameters fixed at
    base_params.
    """

    axis1_index: int
    axis2_index: int
    axis_values: np.ndarray
    costs: np.ndarray
    base_params: np.ndarray
    fingerprint: str


def scan(ansatz: Ansatz, spec: CostSpec, channel=None, axis1: int = 0,
         axis2: int = 1, axis_range=(-math.pi, math.pi), resolution: int = 50,
         base_seed: int = 0) -> LandscapeGrid:
    """Evaluate the cost over a grid in two parameters.

    Base parameters are drawn once from the seeded generator; the two scanned
    entries are overwritten at each grid point.
    """
    num_params = ansatz.num_parameters
    if not 0 <= axis1 < num_params or not 0 <= axis2 < num_params:
        raise ValueError(f"axis indices must be in [0, {num_params})")
    if axis1 == axis2:
        raise ValueError("axis1 and axis2 must differ")
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    lo, hi = float(axis_range[0]), float(axis_range[1])
    if not lo < hi:
        raise ValueError(f"invalid axis range [{lo}, {hi}]")
    base = random_parameters(ansatz.num_qubits, ansatz.num_layers, base_seed)
    values = np.linspace(lo, hi, resolution)
    costs = np.zeros((resolution, resolution))
    params = base.copy()
    for i, a in enumerate(values):
        params[axis1] = a
        for j, b in enumerate(values):
            params[axis2] = b
            costs[i, j] = cost(evolve(ansatz, params, channel), spec)
    noise = "none" if channel is None else f"{channel.name}:{channel.probability!r}"
    fp = (
        f"n={ansatz.num_qubits};layers={ansatz.num_layers};"
        f"obs={spec.observable.kind};noise={noise};policy={ansatz.noise_policy};"
        f"axes=({axis1},{axis2});range=({lo!r},{hi!r});"
        f"resolution={resolution};base_seed={base_seed}"
    )
    return LandscapeGrid(axis1, axis2, values, costs, base, fp)


def flatness(grid: LandscapeGrid) -> float:
    """Cost spread over the grid: max - min."""
    return float(np.max(grid.costs) - np.min(grid.costs))


def grid_to_csv(grid: LandscapeGrid) -> str:
    """Serialize as axis1,axis2,cost rows at 17 significant digits."""
    lines = ["axis1,axis2,cost"]
    for i, a in enumerate(grid.axis_values):
        for j, b in enumerate(grid.axis_values):
            lines.append(f"{a:.17g},{b:.17g},{grid.costs[i, j]:.17g}")
    return "\n".join(lines) + "\n"


def write_csv(grid: LandscapeGrid, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(grid_to_csv(grid))
