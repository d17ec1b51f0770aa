import math

import numpy as np
import pytest
from scipy import stats

from levystop.errors import OutOfConvergenceStrip
from levystop.model import LevyModel
from levystop.spectral import find_roots, green_kernel
from levystop.wienerhopf import (
    NONNEGATIVE,
    HalfLineLaw,
    check_factorization,
    factor_mgf,
    wh_factors,
)

from conftest import COMPOUND_POISSON, KOU, WIENER


@pytest.mark.parametrize("r", [0.1, 1.0, 3.0])
def test_residual_small(model_class, r):
    assert check_factorization(model_class, r) < 1e-9


def test_wiener_supremum_is_exponential():
    r = 0.5
    f = wh_factors(WIENER, r)
    rho_plus = find_roots(WIENER, r).rhos[1]
    assert f.supremum.atom == pytest.approx(0.0, abs=1e-15)
    assert f.supremum.mixture == ((pytest.approx(1.0), pytest.approx(rho_plus)),)


def test_compound_poisson_atom():
    r = 0.5
    f = wh_factors(COMPOUND_POISSON, r)
    rho2 = find_roots(COMPOUND_POISSON, r).rhos[1]
    assert f.supremum.atom == pytest.approx(rho2 / COMPOUND_POISSON.alpha, rel=1e-12)
    # no down jumps and no diffusion: the infimum is a pure exponential
    assert f.infimum.atom == 0.0
    assert len(f.infimum.mixture) == 1


def test_laws_have_unit_mass(model_class):
    f = wh_factors(model_class, 1.0)
    for law in (f.supremum, f.infimum):
        assert law.atom + law.weights.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(law.weights >= 0)


def test_mean_of_sum_matches_kernel_mean(model_class):
    # E X_tau = psi'(0) / r and X_tau = M_r + I_r in law
    r = 1.0
    f = wh_factors(model_class, r)
    kernel = green_kernel(model_class, r)
    mean_kernel = r * sum(-c / k**2 for c, k in kernel.negative) + r * sum(c / k**2 for c, k in kernel.positive)
    assert f.supremum.mean() + f.infimum.mean() == pytest.approx(mean_kernel, rel=1e-10, abs=1e-12)
    dpsi0 = model_class.a + model_class.lam / model_class.alpha * (model_class.lam > 0) - (
        model_class.mu / model_class.beta * (model_class.mu > 0)
    )
    assert mean_kernel == pytest.approx(dpsi0 / r, rel=1e-10, abs=1e-12)


def test_mgf_outside_strip_raises():
    f = wh_factors(KOU, 1.0)
    with pytest.raises(OutOfConvergenceStrip):
        factor_mgf(f.supremum, f.supremum.min_rate + 0.1)
    with pytest.raises(OutOfConvergenceStrip):
        factor_mgf(f.infimum, -f.infimum.min_rate - 0.1)


def test_half_line_law_sampling():
    law = HalfLineLaw(NONNEGATIVE, 0.25, ((0.5, 2.0), (0.25, 0.5)))
    rng = np.random.default_rng(1)
    x = law.sample(50_000, rng)
    assert np.mean(x == 0) == pytest.approx(0.25, abs=0.01)
    # the atom breaks KS, so test the continuous part against its conditional law
    pos = x[x > 0]
    conditional = lambda t: (law.cdf(t) - law.atom) / (1.0 - law.atom)
    assert stats.kstest(pos, conditional).statistic < 1.628 / math.sqrt(pos.size)
    assert law.cdf(-1.0) == 0.0 and law.cdf(0.0) == pytest.approx(0.25)


def test_factor_sum_matches_kernel_law():
    # sampled M_r + I_r against the law of X at an exp(r) time, both from independent code paths
    r = 1.0
    f = wh_factors(KOU, r)
    kernel = green_kernel(KOU, r)
    rng = np.random.default_rng(7)
    n = 40_000
    x = f.supremum.sample(n, rng) + f.infimum.sample(n, rng)
    assert stats.kstest(x, kernel.cdf).statistic < 1.628 / math.sqrt(n)


def test_r_must_be_positive():
    with pytest.raises(ValueError):
        wh_factors(KOU, 0.0)


def test_down_jump_only_model():
    m = LevyModel(a=0.5, b=0.3, mu=2.0, beta=1.5)
    assert check_factorization(m, 0.7) < 1e-9
    f = wh_factors(m, 0.7)
    assert f.supremum.atom == 0.0
