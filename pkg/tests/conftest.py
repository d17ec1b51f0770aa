import numpy as np
import pytest
from numpy.polynomial import Polynomial as P

from levystop.model import LevyModel

WIENER = LevyModel(a=0.1, b=1.0)
COMPOUND_POISSON = LevyModel(a=-1.0, lam=1.0, alpha=2.0)
KOU = LevyModel(a=0.1, b=1.0, lam=1.0, alpha=3.0, mu=1.0, beta=2.0)

MODEL_CLASSES = {"wiener": WIENER, "compound_poisson": COMPOUND_POISSON, "kou": KOU}


def polynomial_roots(model: LevyModel, r: float) -> np.ndarray:
    """Real roots of psi(z) = r from the numerator polynomial, an independent oracle."""
    z = P([0.0, 1.0])
    den = P([1.0])
    if model.lam > 0:
        den = den * (model.alpha - z)
    if model.mu > 0:
        den = den * (model.beta + z)
    num = (model.a * z + 0.5 * model.b**2 * z**2 - r) * den
    if model.lam > 0:
        num = num + model.lam * z * (den // (model.alpha - z))
    if model.mu > 0:
        num = num - model.mu * z * (den // (model.beta + z))
    roots = num.roots()
    assert np.all(np.abs(roots.imag) < 1e-9)
    return np.sort(roots.real)


@pytest.fixture(params=sorted(MODEL_CLASSES))
def model_class(request):
    return MODEL_CLASSES[request.param]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
