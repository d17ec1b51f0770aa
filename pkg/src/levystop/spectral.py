"""Roots of psi(z) = r and the Green kernel as an exponential mixture.

With the roots rho_k of psi(z) = r and A_k = 1/psi'(rho_k),

    1 / (r - psi(z)) = sum_k A_k / (rho_k - z),

and inverting the Laplace transform gives the resolvent density

    G_r(0, x) = -sum_{rho_k <= 0} A_k e^{-rho_k x}   (x < 0)
              =  sum_{rho_k > 0}  A_k e^{-rho_k x}   (x > 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DriftAssumptionViolated, RootBracketFailure, UnsupportedModel
from .model import LevyModel, psi, psi_prime
from .rootfind import bisect, newton_bracketed

BISECT_XTOL = 1e-8
ROOT_FTOL = 1e-12


@dataclass(frozen=True)
class Root:
    rho: float
    psi_prime: float

    @property
    def A(self) -> float:
        return 1.0 / self.psi_prime


@dataclass(frozen=True)
class RootSet:
    """Real roots of psi(z) = r in increasing order."""

    r: float
    roots: tuple[Root, ...]

    @property
    def rhos(self) -> np.ndarray:
        return np.array([rt.rho for rt in self.roots])

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([rt.A for rt in self.roots])

    @property
    def nonpositive(self) -> tuple[Root, ...]:
        return tuple(rt for rt in self.roots if rt.rho <= 0.0)

    @property
    def positive(self) -> tuple[Root, ...]:
        return tuple(rt for rt in self.roots if rt.rho > 0.0)

    def __len__(self) -> int:
        return len(self.roots)

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "roots": [{"rho": rt.rho, "psi_prime": rt.psi_prime, "A": rt.A} for rt in self.roots],
        }


def expected_root_count(model: LevyModel) -> int:
    """Degree of the numerator polynomial of r - psi(z)."""
    return (2 if model.b > 0 else 1) + len(model.poles)


def _limit_sign(model: LevyModel, point: float, side: int) -> int:
    """Sign of psi(z) - r as z -> point from the given side (+1: from above).

    Only called for +-inf and the poles, where the sign does not depend on r.
    """
    if math.isinf(point):
        if model.b > 0:
            return 1
        return 1 if model.a * point > 0 else -1
    if model.has_up_jumps and point == model.alpha:
        return -1 if side > 0 else 1
    if model.has_down_jumps and point == -model.beta:
        return 1 if side > 0 else -1
    raise AssertionError(f"no limit rule for {point}")


def _inner_point(f, end: float, other: float, want: int, is_zero_end: bool) -> float:
    """A point strictly between ``end`` and ``other`` near ``end`` where sign(f) == want."""
    direction = 1.0 if other > end else -1.0
    if math.isinf(end):
        base = other
        step = max(1.0, abs(other))
        for _ in range(200):
            x = base - direction * step
            if np.sign(f(x)) == want:
                return x
            step *= 2.0
        raise RootBracketFailure(f"could not reach the limit sign toward {end}")
    width = abs(other - end)
    delta = 0.5 * min(1.0 if math.isinf(width) else width, 1.0) * (1.0 if is_zero_end else max(1.0, abs(end)))
    for _ in range(200):
        x = end + direction * delta
        if x != end and np.sign(f(x)) == want:
            return x
        delta *= 0.5
    raise RootBracketFailure(f"could not reach the limit sign near {end}")


def find_roots(model: LevyModel, r: float) -> RootSet:
    """All real roots of psi(z) = r, one per sign-change interval.

    The real line is cut at the poles of psi (and at 0 inside the pole-free
    middle piece, where psi(0) - r = -r <= 0). On every piece whose end
    behaviour changes sign there is exactly one root; the total is checked
    against the degree of the underlying polynomial.
    """
    r = float(r)
    if r < 0:
        raise ValueError("discount rate must be nonnegative")
    if model.b == 0 and model.a == 0:
        raise UnsupportedModel("b = a = 0: the resolvent has an atom at 0 and no exponential-mixture form")
    dpsi0 = psi_prime(model, 0.0)
    if r == 0 and dpsi0 >= 0:
        raise DriftAssumptionViolated(f"r = 0 requires psi'(0) < 0 (drift to -inf), got {dpsi0}")

    def f(z):
        return psi(model, z) - r

    cuts = [-math.inf, *model.poles, math.inf]
    pieces = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if lo < 0.0 < hi:
            pieces.extend([(lo, 0.0), (0.0, hi)])
        else:
            pieces.append((lo, hi))

    found: list[float] = [0.0] if r == 0 else []
    for lo, hi in pieces:
        ends = []
        for end, other, side in ((lo, hi, 1), (hi, lo, -1)):
            if end == 0.0:
                # psi(0) - r = -r; at r = 0 use the sign just off zero
                sign = -1 if r > 0 else int(np.sign(dpsi0)) * side
                point = 0.0 if r > 0 else _inner_point(f, 0.0, other, sign, True)
            else:
                sign = _limit_sign(model, end, side)
                point = _inner_point(f, end, other, sign, False)
            ends.append((sign, point))
        (s_lo, x_lo), (s_hi, x_hi) = ends
        if s_lo == s_hi:
            continue
        a_, b_ = bisect(f, x_lo, x_hi, BISECT_XTOL * max(1.0, abs(x_lo), abs(x_hi)))
        if a_ == b_:
            found.append(a_)
            continue
        root = newton_bracketed(
            f, lambda z: psi_prime(model, z), a_, b_, 0.5 * (a_ + b_), ftol=ROOT_FTOL * max(1.0, r)
        )
        found.append(root)

    found.sort()
    if len(found) != expected_root_count(model):
        raise RootBracketFailure(
            f"found {len(found)} roots {found}, expected {expected_root_count(model)} for {model}"
        )
    roots = tuple(Root(z, psi_prime(model, z)) for z in found)
    for rt in roots:
        if (rt.rho <= 0 and rt.psi_prime >= 0) or (rt.rho > 0 and rt.psi_prime <= 0):
            raise RootBracketFailure(f"derivative sign pattern violated at rho={rt.rho}: psi'={rt.psi_prime}")
    return RootSet(r, roots)


def partial_fractions(model: LevyModel, rootset: RootSet) -> list[tuple[float, float]]:
    """Pairs (rho_k, A_k) with 1/(r - psi(z)) = sum A_k / (rho_k - z)."""
    return [(rt.rho, rt.A) for rt in rootset.roots]


def resolvent_transform(rootset: RootSet, z):
    """sum_k A_k / (rho_k - z), the partial-fraction side of the identity."""
    z = np.asarray(z, dtype=float)
    out = sum(rt.A / (rt.rho - z) for rt in rootset.roots)
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class ExpMixtureKernel:
    """Resolvent density x -> G_r(0, x) as sum c_j exp(-rate_j x) on each half-line.

    Negative-side rates are <= 0 and positive-side rates > 0, so both
    branches decay away from the origin (a zero rate is the constant branch
    of the r = 0 kernel). At 0 the smaller one-sided limit is used, making
    the density lower semicontinuous.
    """

    negative: tuple[tuple[float, float], ...]
    positive: tuple[tuple[float, float], ...]
    value_at_zero: float
    r: float

    @property
    def left_limit(self) -> float:
        return float(sum(c for c, _ in self.negative))

    @property
    def right_limit(self) -> float:
        return float(sum(c for c, _ in self.positive))

    @property
    def decay_rates(self) -> tuple[float, ...]:
        return tuple(abs(k) for _, k in self.negative + self.positive)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        neg = np.zeros_like(x)
        pos = np.zeros_like(x)
        xn = np.minimum(x, 0.0)
        xp = np.maximum(x, 0.0)
        for c, k in self.negative:
            neg = neg + c * np.exp(-k * xn)
        for c, k in self.positive:
            pos = pos + c * np.exp(-k * xp)
        out = np.where(x < 0, neg, np.where(x > 0, pos, self.value_at_zero))
        return out if out.ndim else float(out)

    def G(self, x, y):
        """G_r(x, y) = G_r(0, y - x) by spatial homogeneity."""
        return self.density(np.asarray(y, dtype=float) - np.asarray(x, dtype=float))

    def total_mass(self) -> float:
        """Closed-form integral of the density over the real line (inf if r = 0)."""
        total = 0.0
        for c, k in self.negative + self.positive:
            if k == 0.0:
                return math.inf
            total += c / abs(k)
        return total

    def cdf(self, x):
        """r * int_{-inf}^x G_r(0, y) dy, the law of X at an independent exp(r) time."""
        if self.r <= 0:
            raise ValueError("the kernel is a scaled probability density only for r > 0")
        x = np.asarray(x, dtype=float)
        xn = np.minimum(x, 0.0)
        xp = np.maximum(x, 0.0)
        left = sum(c * np.exp(-k * xn) / (-k) for c, k in self.negative)
        right = sum(c * (1.0 - np.exp(-k * xp)) / k for c, k in self.positive)
        out = self.r * (left + right)
        return out if np.ndim(out) else float(out)

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "negative": [{"c": c, "rate": k} for c, k in self.negative],
            "positive": [{"c": c, "rate": k} for c, k in self.positive],
            "value_at_zero": self.value_at_zero,
            "left_limit": self.left_limit,
            "right_limit": self.right_limit,
        }


def kernel_from_roots(rootset: RootSet) -> ExpMixtureKernel:
    negative = tuple((-rt.A, rt.rho) for rt in rootset.nonpositive)
    positive = tuple((rt.A, rt.rho) for rt in rootset.positive)
    left = sum(c for c, _ in negative)
    right = sum(c for c, _ in positive)
    return ExpMixtureKernel(negative, positive, min(left, right), rootset.r)


def green_kernel(model: LevyModel, r: float) -> ExpMixtureKernel:
    return kernel_from_roots(find_roots(model, r))


def kernel_density_at(kernel: ExpMixtureKernel, x):
    return kernel.density(x)
