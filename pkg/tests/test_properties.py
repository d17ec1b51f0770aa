"""Property-based checks over randomly drawn models."""

import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from levystop.model import LevyModel, psi
from levystop.spectral import expected_root_count, find_roots, green_kernel
from levystop.stopping.power import solve_threshold, threshold_function
from levystop.wienerhopf import check_factorization, wh_factors

from conftest import polynomial_roots

positive = st.floats(0.1, 5.0)


@st.composite
def models(draw):
    b = draw(st.sampled_from([0.0, 0.5, 1.0, 2.0]))
    lam = draw(st.sampled_from([0.0, 0.5, 2.0]))
    mu = draw(st.sampled_from([0.0, 0.5, 2.0]))
    a = draw(st.floats(-2.0, 2.0))
    if b == 0:
        assume(abs(a) > 0.05)
    return LevyModel(a=a, b=b, lam=lam, alpha=draw(positive), mu=mu, beta=draw(positive))


@settings(max_examples=150, deadline=None)
@given(models(), st.floats(0.05, 5.0))
def test_roots_solve_the_equation(m, r):
    roots = find_roots(m, r)
    assert len(roots) == expected_root_count(m)
    for rt in roots.roots:
        assert abs(psi(m, rt.rho) - r) < 1e-9 * max(1.0, r)
    np.testing.assert_allclose(roots.rhos, polynomial_roots(m, r), rtol=1e-7, atol=1e-9)


@settings(max_examples=150, deadline=None)
@given(models(), st.floats(0.05, 5.0))
def test_kernel_normalization_and_continuity(m, r):
    roots = find_roots(m, r)
    kernel = green_kernel(m, r)
    assert abs(r * kernel.total_mass() - 1.0) < 1e-10
    if m.b > 0:
        assert abs(roots.coefficients.sum()) < 1e-10
        assert abs(kernel.left_limit - kernel.right_limit) < 1e-10
    else:
        # jump at zero equals 1/|a|
        assert abs(abs(kernel.left_limit - kernel.right_limit) - 1.0 / abs(m.a)) < 1e-9 / abs(m.a)


@settings(max_examples=120, deadline=None)
@given(models(), st.floats(0.05, 5.0))
def test_factorization_identity(m, r):
    assert check_factorization(m, r) < 1e-9
    f = wh_factors(m, r)
    assert f.supremum.atom >= 0 and f.infimum.atom >= 0
    # an atom at 0 for the supremum exactly when paths cannot creep upward
    creeps_up = m.b > 0 or m.a > 0
    assert (f.supremum.atom == 0) == creeps_up


@settings(max_examples=120, deadline=None)
@given(st.floats(0.2, 20.0), st.floats(0.05, 0.95), st.floats(0.05, 30.0))
def test_threshold_properties(alpha, frac, u):
    # lam/(-a) = frac * alpha keeps rho = alpha (1 - frac) > 0
    m = LevyModel(a=-1.0, lam=frac * alpha, alpha=alpha)
    x = solve_threshold(m, u)
    assert 0 < x < u / m.rho
    assert abs(threshold_function(m, x, u) - 1.0) < 1e-10
    assert threshold_function(m, 0.5 * x, u) > 1.0


@settings(max_examples=60, deadline=None)
@given(st.floats(0.2, 20.0), st.floats(0.05, 0.95), st.floats(1.0, 20.0), st.floats(0.01, 1.0))
def test_threshold_increases_with_exponent(alpha, frac, u, du):
    m = LevyModel(a=-1.0, lam=frac * alpha, alpha=alpha)
    assert solve_threshold(m, u + du) > solve_threshold(m, u)
