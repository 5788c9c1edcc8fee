import numpy as np
import pytest

from nkji import compute_all, solve_undetermined
from nkji.params import DEFAULTS, validate


@pytest.fixture(scope="session")
def default_params():
    return validate(DEFAULTS)


@pytest.fixture(scope="session")
def default_rf(default_params):
    return compute_all(default_params)


@pytest.fixture(scope="session")
def oracle_rf(default_params):
    return solve_undetermined(default_params)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260809)
