"""Value functions from a representing density, two ways.

Directly, V(x) = int G_r(x, y) sigma'(y) dy over the support of sigma.

Through the extrema: since X at an independent exp(r) time is the sum of
independent copies of M_r and I_r,

    V(x) = E_x[Q(M_r); M_r >= x*],   Q(z) = r^{-1} E[sigma'(z + I_r)],

for supports [x*, inf) and x <= x*; the lower half of a two-sided support
is handled by the mirror formula with the roles of M_r and I_r swapped.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from ..errors import QuadratureNonConvergence
from ..spectral import ExpMixtureKernel
from ..wienerhopf import HalfLineLaw, WhFactors

QUAD_EPSABS = 1e-13
QUAD_EPSREL = 1e-13
QUAD_ACCEPT = 1e-9
TAIL_LENGTHS = 60.0


@dataclass(frozen=True)
class SpectralDensity:
    """Density sigma' of a representing measure, carried by closed intervals.

    ``pieces`` are disjoint, sorted (lo, hi) pairs; either end may be
    infinite. ``density`` is only called inside a piece.
    """

    pieces: tuple[tuple[float, float], ...]
    density: Callable[[float], float]
    derivative: Callable[[float], float] | None = None
    tag: str = ""
    breakpoints: tuple[float, ...] = field(default=())

    def __call__(self, y: float) -> float:
        for lo, hi in self.pieces:
            if lo <= y <= hi:
                return float(self.density(y))
        return 0.0

    def second(self, y: float) -> float:
        if self.derivative is None:
            raise ValueError(f"density {self.tag!r} has no derivative")
        for lo, hi in self.pieces:
            if lo < y < hi:
                return float(self.derivative(y))
        return 0.0

    @property
    def edges(self) -> tuple[float, ...]:
        out = [e for piece in self.pieces for e in piece if math.isfinite(e)]
        return tuple(sorted(set(out) | set(self.breakpoints)))

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    def restrict(self, lo: float, hi: float) -> "SpectralDensity":
        kept = tuple((max(a, lo), min(b, hi)) for a, b in self.pieces if max(a, lo) < min(b, hi))
        return SpectralDensity(kept, self.density, self.derivative, self.tag, self.breakpoints)

    def split_at(self, x: float) -> tuple["SpectralDensity", "SpectralDensity"]:
        """(part below x, part above x); x must not be interior to a piece."""
        for lo, hi in self.pieces:
            if lo < x < hi:
                raise ValueError(f"x={x} lies inside the support piece [{lo}, {hi}]")
        return self.restrict(-math.inf, x), self.restrict(x, math.inf)

    @classmethod
    def zero(cls) -> "SpectralDensity":
        return cls((), lambda y: 0.0, lambda y: 0.0, "zero")

    @classmethod
    def indicator(cls, *pieces: tuple[float, float]) -> "SpectralDensity":
        return cls(tuple(sorted(pieces)), lambda y: 1.0, lambda y: 0.0, "indicator")


def integrate_1d(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    breaks: Sequence[float] = (),
    scale: float = 1.0,
) -> float:
    """Adaptive Gauss-Kronrod over [lo, hi], split at ``breaks``.

    Infinite ends get a finite buffer of TAIL_LENGTHS * ``scale`` before the
    transformed semi-infinite remainder.
    """
    if not lo < hi:
        return 0.0
    pts = sorted({b for b in breaks if lo < b < hi})
    if math.isinf(hi):
        anchor = pts[-1] if pts else (lo if math.isfinite(lo) else 0.0)
        pts.append(anchor + TAIL_LENGTHS * scale)
    if math.isinf(lo):
        anchor = pts[0] if pts else (hi if math.isfinite(hi) else 0.0)
        pts.insert(0, anchor - TAIL_LENGTHS * scale)
    nodes = [lo, *pts, hi]
    total = 0.0
    for a, b in zip(nodes[:-1], nodes[1:]):
        if not a < b:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(f, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=400)
        if not math.isfinite(val) or err > QUAD_ACCEPT * max(1.0, abs(val)):
            raise QuadratureNonConvergence(f"quad on [{a}, {b}]: value {val}, error estimate {err}")
        total += val
    return total


def _kernel_scale(kernel: ExpMixtureKernel) -> float:
    rates = [k for k in kernel.decay_rates if k > 0]
    return 1.0 / min(rates) if rates else 1.0


def value_via_kernel(kernel: ExpMixtureKernel, sigma: SpectralDensity, x: float) -> float:
    """V(x) = int_support G_r(x, y) sigma'(y) dy."""
    scale = _kernel_scale(kernel)
    total = 0.0
    for lo, hi in sigma.pieces:
        total += integrate_1d(
            lambda y: kernel.G(x, y) * sigma.density(y),
            lo,
            hi,
            breaks=(x, *sigma.breakpoints),
            scale=scale,
        )
    return total


def _law_scale(law: HalfLineLaw) -> float:
    return 1.0 / law.min_rate if law.mixture else 1.0


def q_upper(factors: WhFactors, sigma: SpectralDensity, z: float) -> float:
    """Q(z) = r^{-1} [ int_{y <= z} f_I(y - z) sigma'(y) dy + P(I_r = 0) sigma'(z) ]."""
    inf = factors.infimum
    total = inf.atom * sigma(z) if inf.atom > 0 else 0.0
    if inf.mixture:
        for lo, hi in sigma.pieces:
            total += integrate_1d(
                lambda y: inf.density(y - z) * sigma.density(y),
                lo,
                min(hi, z),
                breaks=sigma.breakpoints,
                scale=_law_scale(inf),
            )
    return total / factors.r


def q_lower(factors: WhFactors, sigma: SpectralDensity, z: float) -> float:
    """Q_*(z) = r^{-1} [ int_{y >= z} f_M(y - z) sigma'(y) dy + P(M_r = 0) sigma'(z) ]."""
    sup = factors.supremum
    total = sup.atom * sigma(z) if sup.atom > 0 else 0.0
    if sup.mixture:
        for lo, hi in sigma.pieces:
            total += integrate_1d(
                lambda y: sup.density(y - z) * sigma.density(y),
                max(lo, z),
                hi,
                breaks=sigma.breakpoints,
                scale=_law_scale(sup),
            )
    return total / factors.r


def q_function(factors: WhFactors, sigma: SpectralDensity, x_star: float, z: float) -> float:
    """Q for a one-sided density supported on [x_star, inf); zero below x_star."""
    if z < x_star:
        return 0.0
    return q_upper(factors, sigma, z)


def value_via_maximum(
    factors: WhFactors,
    q: Callable[[float], float],
    x_star: float,
    x: float,
    breaks: Sequence[float] = (),
) -> float:
    """E_x[Q(M_r); M_r >= x_star] for x <= x_star.

    ``breaks`` are levels where Q has kinks or jumps (the support edges).
    """
    if x > x_star:
        raise ValueError(f"maximum representation needs x <= x_star (x={x}, x_star={x_star})")
    sup = factors.supremum
    total = sup.atom * q(x) if (sup.atom > 0 and x >= x_star) else 0.0
    if sup.mixture:
        total += integrate_1d(
            lambda t: sup.density(t) * q(x + t),
            x_star - x,
            math.inf,
            breaks=[b - x for b in breaks],
            scale=_law_scale(sup),
        )
    return total


def value_via_minimum(
    factors: WhFactors,
    q: Callable[[float], float],
    x_lower: float,
    x: float,
    breaks: Sequence[float] = (),
) -> float:
    """E_x[Q_*(I_r); I_r <= x_lower] for x >= x_lower."""
    if x < x_lower:
        raise ValueError(f"minimum representation needs x >= x_lower (x={x}, x_lower={x_lower})")
    inf = factors.infimum
    total = inf.atom * q(x) if (inf.atom > 0 and x <= x_lower) else 0.0
    if inf.mixture:
        total += integrate_1d(
            lambda t: inf.density(t) * q(x + t),
            -math.inf,
            x_lower - x,
            breaks=[b - x for b in breaks],
            scale=_law_scale(inf),
        )
    return total


def value_via_extrema(factors: WhFactors, sigma: SpectralDensity, x: float) -> float:
    """V(x) for a support (-inf, x_lower] U [x_upper, inf) with x in between.

    Either half may be empty; with only the upper half this is the one-sided
    maximum representation.
    """
    lower, upper = sigma.split_at(x)
    total = 0.0
    if not upper.is_empty:
        x_upper = upper.pieces[0][0]
        total += value_via_maximum(
            factors, lambda z: q_upper(factors, upper, z), x_upper, x, breaks=upper.edges
        )
    if not lower.is_empty:
        x_lower = lower.pieces[-1][1]
        total += value_via_minimum(
            factors, lambda z: q_lower(factors, lower, z), x_lower, x, breaks=lower.edges
        )
    return total
