"""Density-matrix simulation of variational quantum circuits under noise,
with training, landscape, and gradient-variance experiment drivers."""

from .channels import (
    KrausChannel,
    amplitude_damping,
    channel_from_name,
    phase_damping,
    phase_flip,
    validate_cptp,
)
from .states import (
    DensityMatrix,
    StateVector,
    apply_kraus,
    apply_single_qubit_unitary,
    apply_two_qubit_unitary,
    from_statevector,
    ground_state,
    statevector_apply,
)
from .observables import Observable, build_custom_hermitian, expectation, pauli_matrix
from .ansatz import (
    Ansatz,
    GateSpec,
    build_ansatz,
    evolve,
    random_parameters,
    rotation_matrix,
)
from .trainer import (
    AdamState,
    CostSpec,
    TrainingTrace,
    adam_step,
    bp_variance_probe,
    cost,
    gradient_finite_difference,
    gradient_parameter_shift,
    train,
)
from .landscape import LandscapeGrid, flatness, scan
from .experiment import (
    CONVERGENCE_THRESHOLD,
    Cell,
    ConfigError,
    ExperimentConfig,
    RunRecord,
    expand_cells,
    load_config,
    run,
    run_validation,
    summarize,
)

__version__ = "0.1.0"
