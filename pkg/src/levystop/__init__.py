"""Perpetual optimal stopping for Levy processes with exponential-mixture Green kernels."""

from .model import LevyModel, RewardSpec, check_growth_condition, psi, psi_prime, validate
from .simulate import MCEstimate, TripleSample, estimate_policy_value, sample_triple
from .spectral import ExpMixtureKernel, RootSet, find_roots, green_kernel, partial_fractions
from .stopping import ThresholdSolution, solve_power_problem, solve_threshold, value_at
from .table import REFERENCE_TABLE, solve_table
from .wienerhopf import HalfLineLaw, WhFactors, check_factorization, factor_mgf, wh_factors

__version__ = "0.1.0"

__all__ = [
    "REFERENCE_TABLE",
    "ExpMixtureKernel",
    "HalfLineLaw",
    "LevyModel",
    "MCEstimate",
    "RewardSpec",
    "RootSet",
    "ThresholdSolution",
    "TripleSample",
    "WhFactors",
    "check_factorization",
    "check_growth_condition",
    "estimate_policy_value",
    "factor_mgf",
    "find_roots",
    "green_kernel",
    "partial_fractions",
    "psi",
    "psi_prime",
    "sample_triple",
    "solve_power_problem",
    "solve_table",
    "solve_threshold",
    "validate",
    "value_at",
    "wh_factors",
]
