"""Spectral gaps and oscillation bounds for periodic Jacobi matrices."""
from .bounds import BoundsReport, Check, full_verification, kk_bound, theorem_bounds
from .core_model import (
    PeriodicJacobi,
    constant_matrix,
    new_periodic_jacobi,
    normalize,
    shift_origin,
    variation,
)
from .discriminant import (
    discriminant_report,
    discriminant_roots,
    eval_discriminant,
    floquet_matrix,
    hill_discriminant,
    special_solutions,
)
from .errors import ConsistencyError, ConvergenceError, InvalidInputError
from .numerics import Polynomial, eigenvalues_symmetric, eigenvalues_tridiagonal, poly_sup_norm
from .quartic_oracle import (
    oracle_cross_check,
    quartic_band_structure,
    quartic_inequalities,
    quartic_invariants,
)
from .spectrum import BandStructure, band_structure, dirichlet_spectrum, trace_formula_b

__version__ = "0.1.0"
