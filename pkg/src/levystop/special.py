"""Upper incomplete gamma function for real order.

Only the exponentially scaled form is exposed because that is what the
threshold equations need:

    upper_gamma_scaled(a, s) = e^s s^{-a} Gamma(a, s),   s > 0.

For large s it behaves like 1/s, so products such as s * scaled stay O(1)
where Gamma(a, s) itself would underflow.
"""

from __future__ import annotations

import math

_EPS = 1e-16
_FPMIN = 1e-300
_MAX_ITER = 10_000


def _series_lower(a: float, s: float) -> float:
    """sum_{n>=0} s^n / (a (a+1) ... (a+n)) = e^s s^{-a} gamma(a, s)."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= s / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total
    raise ArithmeticError(f"incomplete gamma series did not converge (a={a}, s={s})")


def _continued_fraction_upper(a: float, s: float) -> float:
    """Modified Lentz evaluation of e^s s^{-a} Gamma(a, s)."""
    b = s + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete gamma continued fraction did not converge (a={a}, s={s})")


def upper_gamma_scaled(a: float, s: float) -> float:
    """e^s s^{-a} Gamma(a, s) for a > 0, s > 0."""
    if a <= 0:
        raise ValueError(f"order must be positive, got {a}")
    if s <= 0:
        raise ValueError(f"argument must be positive, got {s}")
    if s > a + 1.0:
        return _continued_fraction_upper(a, s)
    # Gamma(a, s) = Gamma(a) - gamma(a, s), both scaled by e^s s^{-a}
    full = math.exp(s - a * math.log(s) + math.lgamma(a))
    return full - _series_lower(a, s)


def upper_gamma(a: float, s: float) -> float:
    """Gamma(a, s) = int_s^inf t^{a-1} e^{-t} dt (may underflow for large s)."""
    if s == 0:
        return math.gamma(a)
    return upper_gamma_scaled(a, s) * math.exp(a * math.log(s) - s)
