"""Numerical checks of a candidate solution: verification conditions, uniqueness, ODE."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import StepTooLarge
from ..spectral import ExpMixtureKernel
from .representation import SpectralDensity, value_via_kernel

MATCH_TOL = 1e-6
MAJORANT_TOL = 1e-9
DECAY_TOL = 1e-6


@dataclass(frozen=True)
class TheoremReport:
    continuous: bool
    vanishes_left: bool
    equals_reward_on_stopping_set: bool
    majorizes_reward: bool
    continuity_gap: float
    left_tail_value: float
    max_stopping_mismatch: float
    min_majorant_margin: float

    @property
    def passed(self) -> bool:
        return self.continuous and self.vanishes_left and self.equals_reward_on_stopping_set and self.majorizes_reward

    def to_dict(self) -> dict:
        return {**asdict(self), "passed": self.passed}


def verify_theorem_conditions(
    kernel: ExpMixtureKernel,
    sigma: SpectralDensity,
    g: Callable[[float], float],
    x_star: float,
    grid: Sequence[float],
    tol: float = MATCH_TOL,
) -> TheoremReport:
    """Check that V = int G sigma' is a continuous majorant of g, equal to g from x_star on.

    Tolerances are relative to max(1, |g|). Decay on the left is judged at
    the smallest grid point: V there must be below DECAY_TOL times the
    largest value of V met on the grid (and nonincreasing toward the left).
    """
    grid = np.sort(np.asarray(grid, dtype=float))
    if not (grid[0] < x_star <= grid[-1]):
        raise ValueError("grid must extend on both sides of x_star")
    V = np.array([value_via_kernel(kernel, sigma, x) for x in grid])
    G = np.array([float(g(x)) for x in grid])

    # one-sided limits by linear extrapolation, so the slope does not count as a jump
    eps = 1e-5 * max(1.0, abs(x_star))
    v_left = 2 * value_via_kernel(kernel, sigma, x_star - eps) - value_via_kernel(kernel, sigma, x_star - 2 * eps)
    v_right = 2 * value_via_kernel(kernel, sigma, x_star + eps) - value_via_kernel(kernel, sigma, x_star + 2 * eps)
    gap = abs(v_left - v_right)
    continuous = gap <= tol * max(1.0, abs(v_right))

    peak = float(np.max(np.abs(V))) if V.size else 0.0
    tail = V[: max(2, len(V) // 10)]
    vanishes = bool(abs(V[0]) <= DECAY_TOL * max(peak, 1e-300) or peak == 0.0) and bool(np.all(np.diff(tail) >= -tol))

    stop = grid >= x_star
    scale = np.maximum(1.0, np.abs(G))
    mismatch = float(np.max(np.abs(V[stop] - G[stop]) / scale[stop]))
    cont = ~stop
    margin = float(np.min((V[cont] - G[cont]) / scale[cont])) if cont.any() else math.inf

    return TheoremReport(
        continuous=bool(continuous),
        vanishes_left=vanishes,
        equals_reward_on_stopping_set=mismatch <= tol,
        majorizes_reward=margin >= -MAJORANT_TOL,
        continuity_gap=gap,
        left_tail_value=float(V[0]),
        max_stopping_mismatch=mismatch,
        min_majorant_margin=margin,
    )


def uniqueness_scan(
    kernel: ExpMixtureKernel,
    sigma_from: Callable[[float], SpectralDensity],
    g: Callable[[float], float],
    candidates: Sequence[float],
) -> np.ndarray:
    """g(x) - int_[x, inf) G(x, y) sigma'(y) dy for each candidate x, sigma anchored at x."""
    return np.array([float(g(x)) - value_via_kernel(kernel, sigma_from(x), x) for x in candidates])


def ode_residual(
    pairs: Sequence[tuple[float, float]],
    sigma: SpectralDensity,
    value_fn: Callable,
    x,
    h,
):
    """|V'' - (rho1 + rho2) V' + rho1 rho2 V - RHS| with central differences of step h.

    ``pairs`` are the two (rho_k, A_k) of a two-exponential kernel and
    RHS = -(A1 + A2) sigma'' + (rho2 A1 + rho1 A2) sigma'. Arithmetic is
    generic: passing mpmath numbers for x, h (and a value_fn / sigma that
    accept them) runs the whole check in extended precision.
    """
    if len(pairs) != 2:
        raise ValueError("the ODE form needs a kernel with exactly two exponentials")
    (rho1, A1), (rho2, A2) = sorted(pairs)
    dist = min((abs(x - e) for e in sigma.edges), default=math.inf)
    if h >= dist:
        raise StepTooLarge(f"step {h} reaches the kink at distance {dist}")
    vm, v0, vp = value_fn(x - h), value_fn(x), value_fn(x + h)
    d1 = (vp - vm) / (2 * h)
    d2 = (vp - 2 * v0 + vm) / (h * h)
    lhs = d2 - (rho1 + rho2) * d1 + rho1 * rho2 * v0
    inside = any(lo < x < hi for lo, hi in sigma.pieces)
    if inside:
        s1 = sigma.density(x)
        s2 = sigma.derivative(x) if sigma.derivative is not None else (
            (sigma.density(x + h) - sigma.density(x - h)) / (2 * h)
        )
    else:
        s1 = s2 = 0
    rhs = -(A1 + A2) * s2 + (rho2 * A1 + rho1 * A2) * s1
    return abs(lhs - rhs)
