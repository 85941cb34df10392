"""Simulation toolkit for public-key encryption with certified deletion."""

__version__ = "0.1.0"

from .bits import BitString
from .codes import BCHCode, LinearCode, MatrixCode, get_code, hamming_ball, verify_code
from .qubit import (
    COMPUTATIONAL, HADAMARD, Basis, DenseState, ProductRegister, Qubit, basis_state,
    dense_measure_qubit, dense_project_onto_strings, measure_qubit, outcome_probability,
    to_dense,
)
from .rng import derive_rng, make_rng, trial_rng

__all__ = [
    "__version__", "BitString", "BCHCode", "LinearCode", "MatrixCode", "get_code",
    "hamming_ball", "verify_code", "COMPUTATIONAL", "HADAMARD", "Basis", "DenseState",
    "ProductRegister", "Qubit", "basis_state", "dense_measure_qubit",
    "dense_project_onto_strings", "measure_qubit", "outcome_probability", "to_dense",
    "derive_rng", "make_rng", "trial_rng",
]
