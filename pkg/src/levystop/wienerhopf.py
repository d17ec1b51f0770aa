"""Wiener-Hopf factors of the killed process: laws of M_r and I_r.

r / (r - psi(z)) is rational with poles at the roots of psi = r and zeros
at the jump-rate poles of psi. Assigning the positive poles and the zero at
alpha to one factor and the negative ones (with the zero at -beta) to the
other, each normalized to 1 at z = 0, yields

    E e^{z M_r} = prod_p p/(p - z) * prod_q (q - z)/q,

which is the transform of an atom at 0 plus a mixture of exponentials.
The factor of I_r is the mirror image. The product identity is then checked
on a real grid between the innermost roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FactorConstructionFailure, OutOfConvergenceStrip
from .model import LevyModel, psi
from .spectral import RootSet, find_roots

NONNEGATIVE = "nonnegative"
NONPOSITIVE = "nonpositive"

FACTOR_TOL = 1e-9


@dataclass(frozen=True)
class HalfLineLaw:
    """Atom at 0 plus sum_j w_j * Exp(rate_j), carried by one half-line.

    On the nonpositive side the exponential components are mirrored, i.e.
    the density is sum_j w_j rate_j exp(rate_j x) for x < 0.
    """

    side: str
    atom: float
    mixture: tuple[tuple[float, float], ...]  # (weight, rate)

    @property
    def sign(self) -> int:
        return 1 if self.side == NONNEGATIVE else -1

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.mixture])

    @property
    def rates(self) -> np.ndarray:
        return np.array([k for _, k in self.mixture])

    @property
    def min_rate(self) -> float:
        return min((k for _, k in self.mixture), default=math.inf)

    def density(self, x):
        """Density of the absolutely continuous part (the atom is excluded)."""
        x = np.asarray(x, dtype=float)
        t = self.sign * x
        out = np.zeros_like(x)
        for w, k in self.mixture:
            out = out + w * k * np.exp(-k * np.maximum(t, 0.0))
        out = np.where(t > 0, out, 0.0)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        t = np.abs(x)
        tail = sum((w * np.exp(-k * t) for w, k in self.mixture), np.zeros_like(t))
        if self.side == NONNEGATIVE:
            out = np.where(x < 0, 0.0, 1.0 - tail)
        else:
            out = np.where(x >= 0, 1.0, tail)
        return out if out.ndim else float(out)

    def mean(self) -> float:
        return self.sign * float(sum(w / k for w, k in self.mixture))

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        probs = np.array([self.atom, *self.weights])
        probs = np.clip(probs, 0.0, None)
        probs /= probs.sum()
        comp = rng.choice(len(probs), size=n, p=probs)
        rates = np.concatenate([[np.inf], self.rates])
        out = rng.standard_exponential(n) / rates[comp]
        return self.sign * out

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "atom": self.atom,
            "mixture": [{"w": w, "rate": k} for w, k in self.mixture],
        }


def factor_mgf(law: HalfLineLaw, z):
    """E exp(z Y) = atom + sum w_j rate_j / (rate_j - s z), s = +-1 by side."""
    z = np.asarray(z, dtype=float)
    sz = law.sign * z
    if np.any(sz >= law.min_rate):
        raise OutOfConvergenceStrip(f"z outside the convergence half-line of the {law.side} law")
    out = law.atom + sum((w * k / (k - sz) for w, k in law.mixture), np.zeros_like(sz))
    return out if out.ndim else float(out)


def _law_from_poles_zeros(poles: list[float], zeros: list[float], side: str) -> HalfLineLaw:
    """Partial-fraction form of prod p/(p - w) * prod (q - w)/q in w = s z."""
    if len(zeros) > len(poles):
        raise FactorConstructionFailure(f"{side} factor has more zeros {zeros} than poles {poles}")
    if len(set(poles)) != len(poles):
        raise FactorConstructionFailure(f"repeated poles {poles}")
    mixture = []
    for j, p in enumerate(poles):
        residue = p
        for i, p_i in enumerate(poles):
            if i != j:
                residue *= p_i / (p_i - p)
        for q in zeros:
            residue *= (q - p) / q
        mixture.append((residue / p, p))
    if len(zeros) == len(poles):
        atom = math.prod(poles) / math.prod(zeros) if poles else 1.0
    else:
        atom = 0.0
    return HalfLineLaw(side, atom, tuple(mixture))


@dataclass(frozen=True)
class WhFactors:
    supremum: HalfLineLaw
    infimum: HalfLineLaw
    r: float
    rootset: RootSet

    def to_dict(self) -> dict:
        return {"r": self.r, "supremum": self.supremum.to_dict(), "infimum": self.infimum.to_dict()}


def factorization_grid(rootset: RootSet, model: LevyModel, n: int) -> np.ndarray:
    """n points strictly inside the interval between the innermost roots."""
    neg = [rt.rho for rt in rootset.roots if rt.rho < 0]
    pos = [rt.rho for rt in rootset.roots if rt.rho > 0]
    lo_strip, hi_strip = model.strip
    lo = max(neg) if neg else (lo_strip if math.isfinite(lo_strip) else -10.0 * max(1.0, *pos))
    hi = min(pos) if pos else (hi_strip if math.isfinite(hi_strip) else 10.0 * max(1.0, *[-x for x in neg]))
    return np.linspace(lo, hi, n + 2)[1:-1]


def _residual(model: LevyModel, r: float, sup: HalfLineLaw, inf: HalfLineLaw, z: np.ndarray) -> float:
    prod = factor_mgf(sup, z) * factor_mgf(inf, z)
    return float(np.max(np.abs(prod * (r - psi(model, z)) / r - 1.0)))


def _build_factors(model: LevyModel, r: float) -> WhFactors:
    if r <= 0:
        raise ValueError("Wiener-Hopf factors are built for r > 0 only")
    rootset = find_roots(model, r)
    pos = [rt.rho for rt in rootset.roots if rt.rho > 0]
    neg = [-rt.rho for rt in rootset.roots if rt.rho < 0]
    sup = _law_from_poles_zeros(pos, [model.alpha] if model.has_up_jumps else [], NONNEGATIVE)
    inf = _law_from_poles_zeros(neg, [model.beta] if model.has_down_jumps else [], NONPOSITIVE)
    for law in (sup, inf):
        if law.atom < 0 or any(w < 0 for w, _ in law.mixture):
            raise FactorConstructionFailure(f"negative weight in {law}")
        if abs(law.atom + sum(w for w, _ in law.mixture) - 1.0) > 1e-12:
            raise FactorConstructionFailure(f"{law.side} law does not have unit mass")
    return WhFactors(sup, inf, r, rootset)


def wh_factors(model: LevyModel, r: float, check_points: int = 100) -> WhFactors:
    """Laws of M_r and I_r; raises if the product identity fails on the check grid."""
    factors = _build_factors(model, r)
    z = factorization_grid(factors.rootset, model, check_points)
    res = _residual(model, r, factors.supremum, factors.infimum, z)
    if not res < FACTOR_TOL:
        raise FactorConstructionFailure(f"product identity residual {res:.3e} >= {FACTOR_TOL}")
    return factors


def check_factorization(model: LevyModel, r: float, grid_size: int = 100) -> float:
    """max |phi+(z) phi-(z) (r - psi(z)) / r - 1| over a grid between the innermost roots."""
    factors = _build_factors(model, r)
    z = factorization_grid(factors.rootset, model, grid_size)
    return _residual(model, r, factors.supremum, factors.infimum, z)
