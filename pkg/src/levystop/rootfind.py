"""Bracketed scalar root finding: bisection and safeguarded Newton-Raphson."""

from __future__ import annotations

import math
from typing import Callable

from .errors import NonConvergence, RootBracketFailure


def bisect(f: Callable[[float], float], lo: float, hi: float, xtol: float, maxiter: int = 400) -> tuple[float, float]:
    """Shrink [lo, hi] until its width is below ``xtol``; returns the final bracket.

    ``f(lo)`` and ``f(hi)`` must have opposite signs (or one may be zero).
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo, lo
    if fhi == 0.0:
        return hi, hi
    if (flo > 0) == (fhi > 0):
        raise RootBracketFailure(f"no sign change on [{lo}, {hi}]: f = ({flo}, {fhi})")
    for _ in range(maxiter):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def newton_bracketed(
    f: Callable[[float], float],
    df: Callable[[float], float],
    lo: float,
    hi: float,
    x0: float | None = None,
    ftol: float = 1e-12,
    maxiter: int = 50,
    bisect_iter: int = 400,
) -> float:
    """Newton-Raphson from ``x0`` kept inside a sign-change bracket.

    A Newton step that leaves the current bracket is replaced by a bisection
    step. If |f| <= ftol is not reached within ``maxiter`` steps, plain
    bisection takes over for up to ``bisect_iter`` halvings.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise RootBracketFailure(f"no sign change on [{lo}, {hi}]: f = ({flo}, {fhi})")
    sign_lo = flo > 0
    x = 0.5 * (lo + hi) if x0 is None or not lo < x0 < hi else x0
    fx = f(x)
    for _ in range(maxiter):
        if abs(fx) <= ftol:
            return x
        if (fx > 0) == sign_lo:
            lo = x
        else:
            hi = x
        d = df(x)
        step_ok = d != 0.0 and math.isfinite(d)
        x_new = x - fx / d if step_ok else lo
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        if x_new == x:
            return x
        x, fx = x_new, f(x_new)
    for _ in range(bisect_iter):
        if abs(fx) <= ftol:
            return x
        if (fx > 0) == sign_lo:
            lo = x
        else:
            hi = x
        x_new = 0.5 * (lo + hi)
        if x_new == x:
            break
        x, fx = x_new, f(x_new)
    if abs(fx) <= ftol:
        return x
    raise NonConvergence(f"root not resolved to |f| <= {ftol}: x={x}, f(x)={fx}")
