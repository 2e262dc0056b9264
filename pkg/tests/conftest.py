import numpy as np
import pytest

from nonsplit.sigma_solver import solve_extremal_dde


@pytest.fixture(scope="session")
def dde_cache():
    """Extremal DDE solutions shared across test modules, keyed by (k, u_max, step)."""
    cache = {}

    def get(k, u_max, step=1e-3):
        key = (k, round(u_max, 9), step)
        if key not in cache:
            cache[key] = solve_extremal_dde(k, u_max, step)
        return cache[key]

    return get


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)
