"""Undiscounted stopping of a compound Poisson process with reward max(0, x)^gamma.

The process has negative drift a < 0, up-jumps Exp(alpha) at rate lam, and
drifts to -inf (rho = alpha + lam/a > 0). Its r = 0 Green kernel is

    G(0, y) = A2 e^{-rho y}  (y >= 0),     G(0, y) = -A1  (y < 0),

with A1 = alpha/(lam + a alpha) < 0 and A2 = lam/(a (lam + a alpha)) > 0.

Incomplete-gamma reductions used below (s = alpha x, t = alpha (x + y)):

    e^{alpha x} int_x^inf e^{-alpha y} y^{k-1} dy = x^k * S(k, alpha x)
    F(x; u) = lam/(-a alpha) * s * S(u + 1, s)

where S(k, s) = e^s s^{-k} Gamma(k, s) is :func:`upper_gamma_scaled`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from ..errors import DomainError, NoRoot
from ..model import LevyModel, require_power_problem_config
from ..rootfind import newton_bracketed
from ..special import upper_gamma_scaled
from .representation import SpectralDensity

THRESHOLD_FTOL = 1e-12
NEWTON_MAXITER = 50


def kernel_constants(model: LevyModel) -> tuple[float, float]:
    """(A1, A2) of the r = 0 kernel."""
    denom = model.lam + model.a * model.alpha
    return model.alpha / denom, model.lam / (model.a * denom)


def _check_x(x: float) -> None:
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")


def sigma_prime(model: LevyModel, gamma: float, x: float) -> float:
    """Density of the representing measure solving the ODE with V = x^gamma.

        sigma'(x) = -a gamma x^{gamma-1} - lam gamma e^{alpha x} int_x^inf e^{-alpha y} y^{gamma-1} dy
                  = -a gamma x^{gamma-1} - lam gamma x^gamma S(gamma, alpha x)
    """
    _check_x(x)
    return -model.a * gamma * x ** (gamma - 1) - model.lam * gamma * x**gamma * upper_gamma_scaled(
        gamma, model.alpha * x
    )


def sigma_second(model: LevyModel, gamma: float, x: float) -> float:
    """Derivative of :func:`sigma_prime`, from -sigma'' + alpha sigma' = a g'' - (a alpha + lam) g'."""
    _check_x(x)
    a, lam, alpha = model.a, model.lam, model.alpha
    g1 = gamma * x ** (gamma - 1)
    g2 = gamma * (gamma - 1) * x ** (gamma - 2) if gamma != 1 else 0.0
    return alpha * sigma_prime(model, gamma, x) - a * g2 + (a * alpha + lam) * g1


def threshold_function(model: LevyModel, x: float, u: float) -> float:
    """F(x; u) = lam/(-a) int_0^inf e^{-alpha y} (1 + y/x)^u dy."""
    _check_x(x)
    if u < 0:
        raise DomainError(f"u must be nonnegative, got {u}")
    base = model.lam / (-model.a * model.alpha)
    if u == 0:
        return base
    s = model.alpha * x
    return base * s * upper_gamma_scaled(u + 1.0, s)


def threshold_function_dx(model: LevyModel, x: float, u: float) -> float:
    """dF/dx, using d/ds[s S(u+1, s)] = s S(u+1, s) (1 - u/s) - 1."""
    _check_x(x)
    if u == 0:
        return 0.0
    s = model.alpha * x
    h = s * upper_gamma_scaled(u + 1.0, s)
    return model.lam / (-model.a) * (h * (1.0 - u / s) - 1.0)


def solve_threshold(model: LevyModel, u: float) -> float:
    """The unique x > 0 with F(x; u) = 1.

    Newton-Raphson from u/rho, safeguarded by the bracket
    [lower, u/rho] where F(u/rho; u) < 1 always and F > 1 at the lower end
    (u lam/(-a alpha rho) for u >= 1, found by halving for u < 1).
    F(x; u) grows like x^{-u} near 0, so a root exists for every u > 0, but
    for very small u it can sit below the smallest double; NoRoot is raised
    then, and for u = 0.
    """
    require_power_problem_config(model)
    if u < 0:
        raise DomainError(f"u must be nonnegative, got {u}")
    if u == 0:
        raise NoRoot("F(x; 0) = lam/(-a alpha) < 1 for every x")
    rho = model.rho
    hi = u / rho

    def f(x):
        return threshold_function(model, x, u) - 1.0

    lo = u * model.lam / (-model.a * model.alpha * rho) if u >= 1 else 0.5 * hi
    while f(lo) <= 0:
        lo *= 0.5
        if lo < 1e-300:
            raise NoRoot(f"no sign change found for u={u}")
    return newton_bracketed(
        f,
        lambda x: threshold_function_dx(model, x, u),
        lo,
        hi,
        x0=hi * (1 - 1e-12),
        ftol=THRESHOLD_FTOL,
        maxiter=NEWTON_MAXITER,
    )


@dataclass(frozen=True)
class ThresholdSolution:
    gamma: float
    model: LevyModel
    rho: float
    x_star: float
    x_circ: float | None

    @property
    def gamma_over_rho(self) -> float:
        return self.gamma / self.rho

    @property
    def left_derivative_at_threshold(self) -> float:
        """V'(x*-) = rho (x*)^gamma."""
        return self.rho * self.x_star**self.gamma

    @property
    def reward_derivative_at_threshold(self) -> float:
        return self.gamma * self.x_star ** (self.gamma - 1)

    @property
    def no_smooth_fit_gap(self) -> float:
        return abs(self.left_derivative_at_threshold - self.reward_derivative_at_threshold)

    def reward(self, x):
        return np.maximum(np.asarray(x, dtype=float), 0.0) ** self.gamma

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "rho": self.rho,
            "x_circ": self.x_circ,
            "x_star": self.x_star,
            "gamma_over_rho": self.gamma_over_rho,
            "no_smooth_fit_gap": self.no_smooth_fit_gap,
        }


def solve_power_problem(model: LevyModel, gamma: float) -> ThresholdSolution:
    """Threshold x* = phi(gamma) and sign-change point x_circ = phi(gamma - 1) of sigma'."""
    if gamma < 1:
        raise DomainError(f"gamma must be >= 1, got {gamma}")
    require_power_problem_config(model)
    x_star = solve_threshold(model, gamma)
    x_circ = solve_threshold(model, gamma - 1.0) if gamma > 1 else None
    return ThresholdSolution(gamma, model, model.rho, x_star, x_circ)


def value_at(solution: ThresholdSolution, x):
    """V(x) = e^{rho (x - x*)} (x*)^gamma below x*, x^gamma above."""
    x = np.asarray(x, dtype=float)
    xs, g = solution.x_star, solution.gamma
    below = np.exp(solution.rho * (np.minimum(x, xs) - xs)) * xs**g
    out = np.where(x < xs, below, np.maximum(x, 0.0) ** g)
    return out if out.ndim else float(out)


def power_spectral_density(model: LevyModel, gamma: float, support_start: float) -> SpectralDensity:
    """sigma' restricted to [support_start, inf)."""
    if support_start <= 0:
        raise DomainError("support must start at a positive level")
    return SpectralDensity(
        pieces=((support_start, math.inf),),
        density=lambda y: sigma_prime(model, gamma, y),
        derivative=lambda y: sigma_second(model, gamma, y),
        tag=f"power(gamma={gamma})",
    )


# High-precision twins, used where finite differences need more than double precision.


def sigma_prime_mp(model: LevyModel, gamma, x):
    a, lam, alpha = (mpmath.mpf(v) for v in (model.a, model.lam, model.alpha))
    gamma, x = mpmath.mpf(gamma), mpmath.mpf(x)
    tail = mpmath.exp(alpha * x) * mpmath.gammainc(gamma, alpha * x) * alpha ** (-gamma)
    return -a * gamma * x ** (gamma - 1) - lam * gamma * tail


def sigma_second_mp(model: LevyModel, gamma, x):
    a, lam, alpha = (mpmath.mpf(v) for v in (model.a, model.lam, model.alpha))
    gamma, x = mpmath.mpf(gamma), mpmath.mpf(x)
    g1 = gamma * x ** (gamma - 1)
    g2 = gamma * (gamma - 1) * x ** (gamma - 2)
    return alpha * sigma_prime_mp(model, gamma, x) - a * g2 + (a * alpha + lam) * g1


def value_at_mp(solution: ThresholdSolution, x):
    x = mpmath.mpf(x)
    xs, g, rho = (mpmath.mpf(v) for v in (solution.x_star, solution.gamma, solution.rho))
    if x < xs:
        return mpmath.exp(rho * (x - xs)) * xs**g
    return x**g


def mp_spectral_density(model: LevyModel, gamma: float, support_start: float) -> SpectralDensity:
    """Like :func:`power_spectral_density` but evaluated in mpmath arithmetic."""
    return SpectralDensity(
        pieces=((support_start, math.inf),),
        density=lambda y: sigma_prime_mp(model, gamma, y),
        derivative=lambda y: sigma_second_mp(model, gamma, y),
        tag=f"power-mp(gamma={gamma})",
    )


def ode_residuals(solution: ThresholdSolution, xs, h: float, dps: int = 40) -> np.ndarray:
    """Finite-difference residuals of the kernel ODE for the closed-form V.

    Evaluated with ``dps`` significant digits so that the O(h^2) truncation
    error is not swamped by cancellation in the second difference.
    """
    from .verify import ode_residual

    model = solution.model
    A1, A2 = kernel_constants(model)
    sigma = mp_spectral_density(model, solution.gamma, solution.x_star)
    out = []
    with mpmath.workdps(dps):
        pairs = [(mpmath.mpf(0), mpmath.mpf(A1)), (mpmath.mpf(model.rho), mpmath.mpf(A2))]
        for x in xs:
            res = ode_residual(pairs, sigma, lambda t: value_at_mp(solution, t), mpmath.mpf(x), mpmath.mpf(h))
            out.append(float(res))
    return np.array(out)
