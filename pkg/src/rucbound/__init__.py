"""Uncertainty bounds for ancilla-free measurements of random unitary qubit channels."""

from .bounds import (
    BoundReport,
    Scenario,
    bound_C,
    bound_C_pure_pvm,
    bound_T,
    brute_force_C,
    two_basis_scenario,
    example_sweep,
    landau_pollak_check,
    lhs_value,
    nontrivial,
    z_norm,
)
from .fef import (
    FefResult,
    correlation_matrix,
    fef_general,
    fef_numeric,
    fef_product,
    fef_two_product_mixture,
)
from .linalg import SpectralSummary, eig_hermitian, ky_fan_norm, ky_fan_sparse, kron, partial_trace
from .optimize import OptimizerOptions
from .quantum import (
    ChannelMeasurement,
    KrausChannel,
    Povm,
    QubitState,
    RandomUnitaryChannel,
    apply_channel,
    choi,
    measure_and_prepare_phi,
    outcome_probability,
    process_effect,
)

__version__ = "0.1.0"
