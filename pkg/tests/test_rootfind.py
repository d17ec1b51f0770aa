import math

import pytest

from levystop.errors import NonConvergence, RootBracketFailure
from levystop.rootfind import bisect, newton_bracketed


def test_bisect_brackets_root():
    lo, hi = bisect(lambda x: x * x - 2.0, 0.0, 2.0, 1e-12)
    assert lo <= math.sqrt(2.0) <= hi
    assert hi - lo <= 1e-12


def test_bisect_needs_sign_change():
    with pytest.raises(RootBracketFailure):
        bisect(lambda x: x * x + 1.0, -1.0, 1.0, 1e-9)


def test_newton_converges():
    root = newton_bracketed(math.cos, lambda x: -math.sin(x), 1.0, 2.0, 1.5)
    assert root == pytest.approx(math.pi / 2, abs=1e-12)


def test_newton_falls_back_when_derivative_misleads():
    # a wrong derivative sends Newton outside the bracket every time
    f = lambda x: x**3 - 0.5
    root = newton_bracketed(f, lambda x: -1.0, 0.0, 1.0, 0.9)
    assert root == pytest.approx(0.5 ** (1 / 3), abs=1e-10)


def test_newton_reports_nonconvergence():
    # discontinuous function: sign change but no root
    f = lambda x: -1.0 if x < 0.3 else 1.0
    with pytest.raises(NonConvergence):
        newton_bracketed(f, lambda x: 1.0, 0.0, 1.0, 0.5, bisect_iter=30)
