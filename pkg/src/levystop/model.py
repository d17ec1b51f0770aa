"""Brownian motion with drift and two-sided exponential jumps.

    X_t = a t + b W_t + sum_{i <= N^lam_t} Y^alpha_i - sum_{i <= N^mu_t} Y^beta_i

with Laplace exponent

    psi(z) = a z + b^2 z^2 / 2 + lam z / (alpha - z) - mu z / (beta + z),

so that E exp(z X_t) = exp(t psi(z)) for z in (-beta, alpha).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .errors import (
    DegenerateModel,
    DriftNotNegative,
    EnvelopeOutsideStrip,
    NonPositiveRate,
    PoleEvaluation,
)


@dataclass(frozen=True)
class LevyModel:
    """Parameters of the jump-diffusion.

    ``alpha`` (resp. ``beta``) is ignored when ``lam`` (resp. ``mu``) is zero.
    Construct through :func:`validate` to get the invariants checked.
    """

    a: float
    b: float = 0.0
    lam: float = 0.0
    alpha: float = 1.0
    mu: float = 0.0
    beta: float = 1.0

    @property
    def has_up_jumps(self) -> bool:
        return self.lam > 0.0

    @property
    def has_down_jumps(self) -> bool:
        return self.mu > 0.0

    @property
    def poles(self) -> tuple[float, ...]:
        """Real poles of psi in increasing order."""
        out = []
        if self.has_down_jumps:
            out.append(-self.beta)
        if self.has_up_jumps:
            out.append(self.alpha)
        return tuple(out)

    @property
    def strip(self) -> tuple[float, float]:
        """Open interval of z where the exponential moment is finite."""
        lo = -self.beta if self.has_down_jumps else -math.inf
        hi = self.alpha if self.has_up_jumps else math.inf
        return lo, hi

    @property
    def is_compound_poisson_down_drift(self) -> bool:
        """b = mu = 0, a < 0, lam > 0: the configuration with a closed-form power-reward solution."""
        return self.b == 0.0 and self.mu == 0.0 and self.a < 0.0 and self.lam > 0.0

    @property
    def rho(self) -> float:
        """alpha + lam / a, the positive root of psi(z) = 0 for the compound Poisson case."""
        return self.alpha + self.lam / self.a

    def to_dict(self) -> dict[str, float]:
        return {
            "a": self.a,
            "b": self.b,
            "lambda": self.lam,
            "alpha": self.alpha,
            "mu": self.mu,
            "beta": self.beta,
        }


def validate(
    a: float,
    b: float = 0.0,
    lam: float = 0.0,
    alpha: float = 1.0,
    mu: float = 0.0,
    beta: float = 1.0,
    *,
    require_negative_drift_cp: bool = False,
) -> LevyModel:
    """Build a :class:`LevyModel`, checking every parameter invariant.

    With ``require_negative_drift_cp`` the model must also be a compound
    Poisson process with negative drift and up-jumps that drifts to -inf
    (rho = alpha + lam/a > 0), which is what the r = 0 power-reward solver
    needs.
    """
    vals = [float(v) for v in (a, b, lam, alpha, mu, beta)]
    if not all(math.isfinite(v) for v in vals):
        raise ValueError(f"model parameters must be finite, got {vals}")
    a, b, lam, alpha, mu, beta = vals
    if b < 0 or lam < 0 or mu < 0:
        raise ValueError("b, lambda and mu must be nonnegative")
    if lam > 0 and alpha <= 0:
        raise NonPositiveRate(f"alpha must be positive when lambda > 0 (alpha={alpha})")
    if mu > 0 and beta <= 0:
        raise NonPositiveRate(f"beta must be positive when mu > 0 (beta={beta})")
    if b == 0 and lam == 0 and mu == 0 and a == 0:
        raise DegenerateModel("a = b = lambda = mu = 0 is the zero process")
    model = LevyModel(a, b, lam, alpha, mu, beta)
    if require_negative_drift_cp:
        require_power_problem_config(model)
    return model


def require_power_problem_config(model: LevyModel) -> None:
    if model.b != 0.0 or model.mu != 0.0 or model.lam <= 0.0:
        raise ValueError("power-reward solver needs b = mu = 0 and lambda > 0")
    if model.a >= 0.0:
        raise DriftNotNegative(f"drift a must be negative, got a={model.a}")
    if model.rho <= 0.0:
        raise DriftNotNegative(
            f"rho = alpha + lambda/a = {model.rho} <= 0: the process does not drift to -inf"
        )


def model_from_mapping(data: Mapping[str, Any], **kwargs) -> LevyModel:
    """Read ``{"a", "b", "lambda", "alpha", "mu", "beta"}``; absent jump keys mean no jumps."""
    known = {"a", "b", "lambda", "alpha", "mu", "beta"}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown model keys: {sorted(unknown)}")
    if "a" not in data:
        raise ValueError("model document must contain the drift 'a'")
    return validate(
        data["a"],
        data.get("b", 0.0),
        data.get("lambda", 0.0),
        data.get("alpha", 1.0),
        data.get("mu", 0.0),
        data.get("beta", 1.0),
        **kwargs,
    )


def load_model(path: str | Path, **kwargs) -> LevyModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_mapping(json.load(fh), **kwargs)


def _check_poles(model: LevyModel, z) -> None:
    z = np.asarray(z)
    if model.has_up_jumps and np.any(z == model.alpha):
        raise PoleEvaluation(f"psi has a pole at z = alpha = {model.alpha}")
    if model.has_down_jumps and np.any(z == -model.beta):
        raise PoleEvaluation(f"psi has a pole at z = -beta = {-model.beta}")


def in_strip(model: LevyModel, z) -> bool | np.ndarray:
    """True where z lies in the strip on which psi is the Laplace exponent."""
    lo, hi = model.strip
    return (np.asarray(z) > lo) & (np.asarray(z) < hi)


def psi(model: LevyModel, z):
    """Laplace exponent. Scalars in, float out; arrays in, arrays out.

    Evaluation outside the strip is allowed (psi is rational there and the
    outermost roots of psi = r live there); only the poles are rejected.
    """
    _check_poles(model, z)
    z = np.asarray(z, dtype=float)
    out = model.a * z + 0.5 * model.b**2 * z * z
    if model.has_up_jumps:
        out = out + model.lam * z / (model.alpha - z)
    if model.has_down_jumps:
        out = out - model.mu * z / (model.beta + z)
    return out if out.ndim else float(out)


def psi_prime(model: LevyModel, z):
    _check_poles(model, z)
    z = np.asarray(z, dtype=float)
    out = model.a + model.b**2 * z
    if model.has_up_jumps:
        out = out + model.lam * model.alpha / (model.alpha - z) ** 2
    if model.has_down_jumps:
        out = out - model.mu * model.beta / (model.beta + z) ** 2
    return out if out.ndim else float(out)


def psi_second(model: LevyModel, z):
    _check_poles(model, z)
    z = np.asarray(z, dtype=float)
    out = model.b**2 + 0.0 * z
    if model.has_up_jumps:
        out = out + 2.0 * model.lam * model.alpha / (model.alpha - z) ** 3
    if model.has_down_jumps:
        out = out + 2.0 * model.mu * model.beta / (model.beta + z) ** 3
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class RewardSpec:
    """Either the power reward max(0, x)^gamma or an exponential growth envelope.

    The envelope kind only records the bound g(x) <= A0 + A1 exp(alpha_g x);
    it is used for the admissibility check, not for solving.
    """

    kind: str
    gamma: float = 1.0
    A0: float = 0.0
    A1: float = 0.0
    alpha_g: float = 0.0

    def __post_init__(self):
        if self.kind == "power":
            if not self.gamma >= 1.0:
                raise ValueError(f"power reward needs gamma >= 1, got {self.gamma}")
        elif self.kind == "envelope":
            if min(self.A0, self.A1, self.alpha_g) < 0:
                raise ValueError("envelope constants must be nonnegative")
        else:
            raise ValueError(f"unknown reward kind {self.kind!r}")

    @classmethod
    def power(cls, gamma: float) -> "RewardSpec":
        return cls("power", gamma=gamma)

    @classmethod
    def envelope(cls, A0: float, A1: float, alpha_g: float) -> "RewardSpec":
        return cls("envelope", A0=A0, A1=A1, alpha_g=alpha_g)

    def __call__(self, x):
        if self.kind != "power":
            raise TypeError("only the power reward is evaluable")
        return np.maximum(np.asarray(x, dtype=float), 0.0) ** self.gamma


def check_growth_condition(model: LevyModel, reward: RewardSpec, r: float) -> bool:
    """Is E_x sup_t e^{-rt} g(X_t) finite?

    Envelope rewards: true iff psi(alpha_g) < r, i.e. E exp(alpha_g X_1) < e^r.
    Equality is reported as false with a warning since the supremum then has
    infinite mean.

    Power rewards are dominated by A0 + A1 exp(eps x) for every eps > 0, so
    the condition is psi(eps) < r for some small eps: automatic for r > 0 and
    equivalent to psi'(0) < 0 (drift to -inf) when r = 0.
    """
    if r < 0:
        raise ValueError("discount rate must be nonnegative")
    if reward.kind == "power":
        return True if r > 0 else psi_prime(model, 0.0) < 0.0
    if model.has_up_jumps and reward.alpha_g >= model.alpha:
        raise EnvelopeOutsideStrip(
            f"alpha_g = {reward.alpha_g} >= alpha = {model.alpha}: exponential moment is infinite"
        )
    value = psi(model, reward.alpha_g)
    if value == r:
        warnings.warn(
            f"psi(alpha_g) == r == {r}: boundary case, growth condition fails",
            RuntimeWarning,
            stacklevel=2,
        )
        return False
    return value < r
