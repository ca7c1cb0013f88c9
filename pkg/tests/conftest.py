import numpy as np
import pytest

from fleetdyn import ClassicalLvmParams, LvmParams


@pytest.fixture
def tab_grad_params():
    """Parameter set used for the published gradient bar chart."""
    return LvmParams(gamma_c=0.01, gamma_h=0.01, a=0.01, epsilon=0.01, mu_c=0.65, mu_h=0.65)


@pytest.fixture
def orbit_params():
    """Classical predator-prey coefficients of the reference phase plot."""
    return ClassicalLvmParams(gamma_c=2.0 / 3.0, gamma_h=1.0, a=4.0 / 3.0, epsilon=1.0)


def random_lvm_params(rng: np.random.Generator) -> LvmParams:
    """Valid random parameters: rates log-uniform on [1e-3, 1], sources on [0.01, 1]."""
    return LvmParams(
        gamma_c=10.0 ** rng.uniform(-3, 0),
        gamma_h=10.0 ** rng.uniform(-3, 0),
        a=10.0 ** rng.uniform(-3, 0),
        epsilon=10.0 ** rng.uniform(-3, 0),
        mu_c=rng.uniform(0.01, 1.0),
        mu_h=rng.uniform(0.01, 1.0),
    )
