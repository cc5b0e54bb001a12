import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")


def hundred_point_data():
    X = np.array([[i, -1.0] for i in range(1, 51)] + [[i - 50, 1.0] for i in range(51, 101)])
    y = np.array([-1] * 50 + [1] * 50)
    return X, y


def random_instance(rng, m, n, noise=0.8):
    """m distinct points in R^n with both labels, loosely separated along x_0."""
    X = rng.standard_normal((m, n))
    y = np.where(X[:, 0] + noise * rng.standard_normal(m) > 0, 1, -1)
    if np.all(y == y[0]):
        y[0] = -y[0]
    return X, y


@pytest.fixture(scope="session")
def hundred_points():
    return hundred_point_data()


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
