"""SIC-POVM fiducials with Fibonacci-Lucas anti-unitary symmetry."""

from .fibonacci import check_dimension_properties, check_identities, dimension, dimensions, fibonacci, lucas
from .kernels import BACKEND
from .modmat import (
    ModMatrix,
    analyze_fibonacci_symmetry,
    canonical_matrices,
    classify_order3,
    mat_mul,
    mat_order,
    mat_pow,
    solve_conjugator,
    symmetry_modulus,
)
from .search import SearchConfig, SearchResult, frame_potential, frame_potential_grad, search, symmetrize
from .verify import VerificationReport, gram_check, stabilizer_probe, triple_products, verify
from .weyl import antiunitary_apply, clifford_unitary, displacement, shift_and_clock, weyl_orbit

__version__ = "0.1.0"
