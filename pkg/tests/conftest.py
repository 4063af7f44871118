import numpy as np
import pytest

from mtfje import JeffreysParams


@pytest.fixture
def fig_params():
    """Fractional orders used throughout the scalar benchmark runs."""
    return JeffreysParams(alpha=0.5, beta=0.35, gamma=0.45, a=1.0, b=100.0)


@pytest.fixture
def table_params():
    """Parameter set of the printed convergence tables (a = b = 10)."""
    return JeffreysParams(alpha=0.25, beta=0.10, gamma=0.25, a=10.0, b=10.0)


@pytest.fixture
def mc_params():
    """Admissible (pdf-strict) set used by the Monte Carlo layer."""
    return JeffreysParams(alpha=0.4, beta=0.45, gamma=0.5, a=1.0, b=2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
