import numpy as np
import pytest

from tcmsvm import KernelConfig
from oracle import poly2_features


def test_linear_gram():
    A = np.array([[1.0, 2.0], [3.0, -1.0]])
    np.testing.assert_allclose(KernelConfig("linear").gram(A), [[5.0, 1.0], [1.0, 10.0]])


def test_polynomial_matches_explicit_features():
    rng = np.random.default_rng(1)
    A = rng.standard_normal((4, 3))
    Phi = poly2_features(A, coef0=1.5)
    np.testing.assert_allclose(KernelConfig("poly", degree=2, coef0=1.5).gram(A), Phi @ Phi.T)


def test_rbf_values():
    k = KernelConfig("rbf", gamma=0.5)
    assert k([0.0, 0.0], [1.0, 1.0]) == pytest.approx(np.exp(-1.0))
    np.testing.assert_allclose(np.diag(k.gram(np.eye(3))), 1.0)


@pytest.mark.parametrize("kwargs", [
    {"kind": "sigmoid"},
    {"kind": "polynomial", "degree": 0},
    {"kind": "rbf", "gamma": 0.0},
])
def test_invalid_configs(kwargs):
    with pytest.raises(ValueError):
        KernelConfig(**kwargs)


def test_defaults_follow_degree_two_polynomial():
    k = KernelConfig("poly")
    assert (k.kind, k.degree, k.coef0) == ("polynomial", 2, 1.0)
