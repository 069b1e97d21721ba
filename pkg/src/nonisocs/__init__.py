"""Sparse recovery with column-weighted (non-isometric) Gaussian sensing.

Core pieces: seeded sampling, sensing-matrix construction, an ADMM basis
pursuit solver with least-squares polishing, the two-stage reweighted l1
recovery pipeline, stability/null-space checks, and a Monte-Carlo
phase-transition harness.
"""

from nonisocs.sampling import SeedSpec, derive_stream, sample_gaussian
from nonisocs.sensing import (
    apply_column_weights,
    apply_forward_weights,
    apply_inverse_weights,
    gen_gaussian_matrix,
    gen_weight_diagonal,
)
from nonisocs.signals import (
    ConstantModulus,
    GaussianAmplitude,
    SparseSignal,
    gen_sparse_signal,
    squared_error,
    supp_k,
    support_overlap,
)
from nonisocs.solver import (
    SolveReport,
    SolverConfig,
    basis_pursuit,
    min_over_nullspace,
    weighted_basis_pursuit,
)
from nonisocs.pipeline import RecoveryConfig, RecoveryOutcome, recover_plain, recover_two_stage
from nonisocs.theory import (
    StabilityCheck,
    check_null_space_condition,
    scaling_law_C,
    verify_stability_bounds,
)

__all__ = [
    "SeedSpec",
    "derive_stream",
    "sample_gaussian",
    "gen_gaussian_matrix",
    "gen_weight_diagonal",
    "apply_column_weights",
    "apply_forward_weights",
    "apply_inverse_weights",
    "ConstantModulus",
    "GaussianAmplitude",
    "SparseSignal",
    "gen_sparse_signal",
    "supp_k",
    "support_overlap",
    "squared_error",
    "SolverConfig",
    "SolveReport",
    "basis_pursuit",
    "weighted_basis_pursuit",
    "min_over_nullspace",
    "RecoveryConfig",
    "RecoveryOutcome",
    "recover_two_stage",
    "recover_plain",
    "scaling_law_C",
    "StabilityCheck",
    "verify_stability_bounds",
    "check_null_space_condition",
]
