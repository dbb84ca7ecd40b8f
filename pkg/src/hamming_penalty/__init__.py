"""
Optimal penalty models isolating bitstrings of a fixed Hamming weight.

The package builds the QUBO and Ising penalty models, evaluates them exactly
over rationals, reports their weight-class landscape by exhaustive
enumeration, certifies the closed-form optimal scales against a gap-maximizing
linear program, and provides interaction-graph and group-averaging analyses.
"""

from .analysis import (
    InteractionGraph,
    PermutationGroupSpec,
    ZeroWitness,
    check_ground_invariance,
    interaction_graph,
    sparse_zero_witness,
    symmetrize,
)
from .builders import (
    Binding,
    BoundKind,
    CoefficientBounds,
    ScaleResult,
    alternate_ising_offset,
    build_ising_hamming,
    build_optimal,
    build_qubo_hamming,
    optimal_ising_scale,
    optimal_qubo_scale,
)
from .certify import (
    LinearProgram,
    LpSolution,
    OptimalityCertificate,
    build_gap_lp,
    certify_optimality,
    run_certification_grid,
    solve_lp,
)
from .config import SolverSettings
from .landscape import (
    PenaltyReport,
    WeightProfile,
    exact_energies,
    ground_states,
    min_penalty,
    spectral_gap,
    weight_profile,
)
from .models import (
    Bitstring,
    IsingModel,
    Qubo,
    complement_qubo,
    evaluate,
    ising_to_qubo,
    permute_model,
    qubo_to_ising,
)

__all__ = [
    "Bitstring",
    "Qubo",
    "IsingModel",
    "evaluate",
    "qubo_to_ising",
    "ising_to_qubo",
    "permute_model",
    "complement_qubo",
    "WeightProfile",
    "PenaltyReport",
    "exact_energies",
    "weight_profile",
    "min_penalty",
    "spectral_gap",
    "ground_states",
    "BoundKind",
    "Binding",
    "CoefficientBounds",
    "ScaleResult",
    "build_qubo_hamming",
    "optimal_qubo_scale",
    "build_ising_hamming",
    "optimal_ising_scale",
    "alternate_ising_offset",
    "build_optimal",
    "LinearProgram",
    "LpSolution",
    "OptimalityCertificate",
    "build_gap_lp",
    "solve_lp",
    "certify_optimality",
    "run_certification_grid",
    "InteractionGraph",
    "PermutationGroupSpec",
    "ZeroWitness",
    "interaction_graph",
    "sparse_zero_witness",
    "symmetrize",
    "check_ground_invariance",
    "SolverSettings",
]
