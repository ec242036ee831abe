import numpy as np
import pytest

from isacsim.allocator import QosTargets, solve_all_cases
from isacsim.scenario import LinkBudget, build_link_budget, default_scenario


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def default_link():
    """Link budget of the reference deployment (unit-gain fading)."""
    return build_link_budget(default_scenario())


@pytest.fixture(scope="session")
def unit_link():
    """Normalized link: unit gains and noise, 1 W total.  snr_total equals
    p_total_w * t_symbols, which keeps detector tests in meaningful regimes."""
    return LinkBudget(g_c=1.0, g_s=1.0, sigma_c2_w=1.0, sigma_s2_w=1.0, p_total_w=1.0)


@pytest.fixture(scope="session")
def default_allocations(default_link):
    """All eight cases solved once at the reference targets (T=20)."""
    targets = QosTargets(r_min=7.0, pd_min=0.6, pfa_delta=0.01)
    return solve_all_cases(targets, default_link, 20)
