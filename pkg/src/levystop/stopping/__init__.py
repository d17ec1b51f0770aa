"""Solving and verifying perpetual stopping problems."""

from .power import (
    ThresholdSolution,
    kernel_constants,
    power_spectral_density,
    sigma_prime,
    sigma_second,
    solve_power_problem,
    solve_threshold,
    threshold_function,
    threshold_function_dx,
    value_at,
)
from .representation import (
    SpectralDensity,
    q_function,
    q_lower,
    q_upper,
    value_via_extrema,
    value_via_kernel,
    value_via_maximum,
    value_via_minimum,
)
from .verify import TheoremReport, ode_residual, uniqueness_scan, verify_theorem_conditions

__all__ = [
    "SpectralDensity",
    "TheoremReport",
    "ThresholdSolution",
    "kernel_constants",
    "ode_residual",
    "power_spectral_density",
    "q_function",
    "q_lower",
    "q_upper",
    "sigma_prime",
    "sigma_second",
    "solve_power_problem",
    "solve_threshold",
    "threshold_function",
    "threshold_function_dx",
    "uniqueness_scan",
    "value_at",
    "value_via_extrema",
    "value_via_kernel",
    "value_via_maximum",
    "value_via_minimum",
    "verify_theorem_conditions",
]
