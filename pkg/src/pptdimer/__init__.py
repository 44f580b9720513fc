"""Spectra and partial-PT symmetry of the two-mode non-Hermitian Bose-Hubbard dimer."""
from .errors import (
    ConvergenceError,
    DomainError,
    HypothesisViolation,
    PairingError,
    PPTError,
    SolverError,
)
from .fock_space import (
    ConjugationKind,
    HomogeneousPoly,
    apply_conjugation,
    inner_product,
    monomial_norm_sq,
)
from .hamiltonian import ModelParams, TridiagMatrix, apply_hamiltonian, beta, build_matrix
from .recurrence import (
    CharPoly,
    EigenPair,
    RootOptions,
    SolveOptions,
    characteristic_poly,
    find_roots,
    recurrence_step,
    solve_sector,
)
from .sweep import SweepGrid, SweepResult, locate_boundary, run_sweep
from .symmetry import (
    PropositionReport,
    SymmetryClass,
    SymmetryReport,
    adjoint_matrix,
    classify,
    verify_propositions,
)

__version__ = "0.1.0"
