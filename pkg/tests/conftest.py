import numpy as np
import pytest

from asianhermite import ModelSpec, NigParams


def ghq_integral(f, drift, scale, nodes=200):
    """Integral of ``f(x) * exp(-(x-a)^2/(2 b^2))`` by Gauss-Hermite quadrature.

    Change of variables ``y = (x - a) / b`` maps onto the probabilists'
    weight, where the rule is exact for polynomial integrands up to degree
    ``2 * nodes - 1``.
    """
    y, w = np.polynomial.hermite_e.hermegauss(nodes)
    return scale * float(np.sum(w * f(drift + scale * y)))


@pytest.fixture(scope="session")
def bm_model():
    return ModelSpec(drift_const=0.0, drift_lin=0.0, diff_sq=1.0)


@pytest.fixture(scope="session")
def ou_model():
    return ModelSpec(drift_const=-0.02, drift_lin=0.01, diff_sq=0.98)


@pytest.fixture(scope="session")
def jd_model():
    return ModelSpec(
        drift_const=-0.02,
        drift_lin=0.01,
        diff_sq=0.49,
        jumps=NigParams(alpha=1.0, beta=0.0, mu=0.0, delta=0.05),
    )
