"""Construct, audit and stress-test subsampled-unitary measurement matrices."""
from .linalg import ApproxSpec, Unitary, approx_within, load_dense, make_unitary, save_dense
from .maurey import (NetParams, NoGoodSample, build_improved_family, build_simple_family,
                     find_good_g, phase_decompose, sample_g, verify_decomposition)
from .recovery import RecoveryResult, iht, omp
from .rip import BudgetExceeded, RipEstimate, check_rip_for_vector, rip_constant_exact, rip_lower_bound
from .sampling import PartialOperator, RowSample, full_sample, make_rng, sample_rows
from .tails import Distribution, tail_probe

__version__ = "0.1.0"

__all__ = [
    "ApproxSpec", "Unitary", "approx_within", "load_dense", "make_unitary", "save_dense",
    "NetParams", "NoGoodSample", "build_improved_family", "build_simple_family", "find_good_g",
    "phase_decompose", "sample_g", "verify_decomposition",
    "RecoveryResult", "iht", "omp",
    "BudgetExceeded", "RipEstimate", "check_rip_for_vector", "rip_constant_exact",
    "rip_lower_bound",
    "PartialOperator", "RowSample", "full_sample", "make_rng", "sample_rows",
    "Distribution", "tail_probe",
]
