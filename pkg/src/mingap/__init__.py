"""Desk-scale spectral toolkit for adiabatic interpolations.

Builds mixer/target Hamiltonian pairs (including the maximum-weight
k-clique encoding on a Hamming-weight-restricted space), tracks
gauge-continuous spectra along H(s) = (1-s) H0 + s H1, locates the
minimum gap, and measures anti-crossings through overlap families,
hyperbola fits and the identities tying the gap to those quantities.
"""

__version__ = "0.1.0"

from .basis import BasisSet, CapacityError, enumerate_basis, mixer_graph, neighbor_state
from .hamiltonian import (
    HamiltonianPair,
    ProblemGraph,
    build_clique_target,
    build_diagonal_target,
    build_swap_mixer,
    build_transverse_field,
    clique_pair,
    interpolate,
)
from .spectral import (
    DegeneracyError,
    EigendecompositionError,
    GapBounds,
    MinGapResult,
    SpectralSweep,
    decompose_interpolated,
    eigendecompose,
    eigenvalue_derivative,
    eigenvalue_second_derivative,
    eigenvector_derivative,
    energy_identity_residual,
    failure_condition_residual,
    gap_identity_residual,
    min_gap,
    min_gap_bounds,
    sweep,
)
from .anticrossing import (
    AntiCrossingReport,
    FinalLevelPartition,
    OverlapSeries,
    RotationResult,
    SolutionDerivativeResult,
    StationarityError,
    StepSizeError,
    SwapMeasurement,
    WilkinsonFit,
    build_report,
    compute_overlaps,
    epsilon_bound_margin,
    gap_decomposition_residual,
    measure_choi,
    measure_solution_swap,
    partition_final_levels,
    rotation_residuals,
    solution_derivative_residuals,
    wilkinson_fit,
)
from .clique import (
    BruteForceResult,
    CliqueInstance,
    brute_force,
    random_instance,
    toy_example_1,
    toy_example_2,
)

__all__ = [
    "__version__",
    "BasisSet", "CapacityError", "enumerate_basis", "mixer_graph", "neighbor_state",
    "HamiltonianPair", "ProblemGraph", "build_clique_target", "build_diagonal_target",
    "build_swap_mixer", "build_transverse_field", "clique_pair", "interpolate",
    "DegeneracyError", "EigendecompositionError", "GapBounds", "MinGapResult",
    "SpectralSweep", "decompose_interpolated", "eigendecompose",
    "eigenvalue_derivative", "eigenvalue_second_derivative", "eigenvector_derivative",
    "energy_identity_residual", "failure_condition_residual", "gap_identity_residual",
    "min_gap", "min_gap_bounds", "sweep",
    "AntiCrossingReport", "FinalLevelPartition", "OverlapSeries", "RotationResult",
    "SolutionDerivativeResult", "StationarityError", "StepSizeError", "SwapMeasurement",
    "WilkinsonFit", "build_report", "compute_overlaps", "epsilon_bound_margin",
    "gap_decomposition_residual", "measure_choi", "measure_solution_swap",
    "partition_final_levels", "rotation_residuals", "solution_derivative_residuals",
    "wilkinson_fit",
    "BruteForceResult", "CliqueInstance", "brute_force", "random_instance",
    "toy_example_1", "toy_example_2",
]
