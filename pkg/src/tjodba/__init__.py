"""Supersymmetric t-J chain with unparallel boundary fields.

Exact diagonalization, coordinate and algebraic Bethe-ansatz objects, an
off-diagonal Bethe-ansatz solver cross-checked against ED, and the
thermodynamic surface-energy formulas with quadrature cross-checks.
"""
from importlib.metadata import PackageNotFoundError, version as _version

from .errors import (ComplexEnergy, ConvergenceFailure, DegenerateEigenbasis, DomainError, InvalidOrder,
                     InvalidSector, NoConvergence, NotHermitian, PoleEncountered, RankDeficient, RegimeMismatch,
                     SingularAtHalf, SingularDenominator, SingularPrefactor, TJError, ToleranceNotMet,
                     UndefinedExponents)
from .kernels import BACKEND
from .model import BoundaryFields, SectorBasis, SectorHamiltonian, build_basis, build_hamiltonian, ed_spectrum
from .odba import BetheRoots, SolverOptions, SolveResult, case_for, energy_from_roots, solve_bae, verify_solution
from .scattering import Momentum, bar_tau, exp_ik, reflection_residual, s_matrix
from .thermo import BoundaryExponents, DensitySolution, B, boundary_string_energy, periodic_ground_energy
from .transfer import extract_lambda, identity_residuals, r_matrix, transfer_matrix

try:
    __version__ = _version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

__all__ = [
    "BACKEND", "B", "BetheRoots", "BoundaryExponents", "BoundaryFields", "ComplexEnergy", "ConvergenceFailure",
    "DegenerateEigenbasis", "DensitySolution", "DomainError", "InvalidOrder", "InvalidSector", "Momentum",
    "NoConvergence", "NotHermitian", "PoleEncountered", "RankDeficient", "RegimeMismatch", "SectorBasis",
    "SectorHamiltonian", "SingularAtHalf", "SingularDenominator", "SingularPrefactor", "SolveResult",
    "SolverOptions", "TJError", "ToleranceNotMet", "UndefinedExponents", "bar_tau", "boundary_string_energy",
    "build_basis", "build_hamiltonian", "case_for", "ed_spectrum", "energy_from_roots", "exp_ik",
    "extract_lambda", "identity_residuals", "periodic_ground_energy", "r_matrix", "reflection_residual",
    "s_matrix", "solve_bae", "transfer_matrix", "verify_solution",
]
