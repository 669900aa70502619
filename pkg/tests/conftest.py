import pytest

from doubleint import ObserverParams, ObserverState, paper_reference_spec

# Gains shared by every reproduction scenario.
K1, K2, K3 = 0.1, 0.1, 1.0


@pytest.fixture
def nl_params():
    """Nonlinear observer of the simulation scenarios (R=5, alpha3=0.3)."""
    return ObserverParams(K1, K2, K3, 0.2, 0.3, "nonlinear")


@pytest.fixture
def lin_params():
    """Linear observer with the same gains and rate."""
    return ObserverParams(K1, K2, K3, 0.2, 1.0, "linear")


@pytest.fixture
def noisy_spec():
    return paper_reference_spec(with_noise=True)


@pytest.fixture
def scenario_x0():
    return ObserverState(0.0, 1.0, 0.0)
