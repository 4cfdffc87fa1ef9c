"""
Pytest configuration and fixtures for kam-criteria tests.
"""

import os

import pytest

# Optional imports - tests will skip if not available
try:
    from kam_criteria.config import preset_config
    from kam_criteria.number_theory import preset
    from kam_criteria.twist_map import Potential, TwistMap, default_potential
    from kam_criteria.variational import minimal_window

    KAM_CRITERIA_AVAILABLE = True
except ImportError:
    KAM_CRITERIA_AVAILABLE = False

FULL_RUN = os.environ.get("KAM_FULL_RUN") == "1"


# Skip markers
requires_kam_criteria = pytest.mark.skipif(
    not KAM_CRITERIA_AVAILABLE, reason="kam_criteria package not available"
)

requires_full_run = pytest.mark.skipif(
    not FULL_RUN, reason="set KAM_FULL_RUN=1 for the desk-scale acceptance runs"
)


@pytest.fixture
def golden():
    """Golden mean to depth 30."""
    if not KAM_CRITERIA_AVAILABLE:
        pytest.skip("kam_criteria not available")
    return preset("golden", 30)


@pytest.fixture
def silver():
    """Silver mean to depth 20."""
    if not KAM_CRITERIA_AVAILABLE:
        pytest.skip("kam_criteria not available")
    return preset("silver", 20)


@pytest.fixture
def zero_twist():
    """Integrable map on the golden mean, level q_n = 5."""
    if not KAM_CRITERIA_AVAILABLE:
        pytest.skip("kam_criteria not available")
    return TwistMap(preset("golden", 12), n=4, eps=0.5, potential=Potential.zero())


@pytest.fixture
def cos_twist():
    """Map with V(x) = cos(2 pi x) at level q_n = 5."""
    if not KAM_CRITERIA_AVAILABLE:
        pytest.skip("kam_criteria not available")
    return TwistMap(preset("golden", 12), n=4, eps=0.5, potential=Potential(((1, 1.0),)))


@pytest.fixture
def standard_twist():
    """Map with the default (2 pi)^-2 cos(2 pi x) potential at level q_n = 5."""
    if not KAM_CRITERIA_AVAILABLE:
        pytest.skip("kam_criteria not available")
    return TwistMap(preset("golden", 12), n=4, eps=0.5, potential=default_potential())


@pytest.fixture
def small_config():
    """The golden_small preset (kappa 5..6, window q_21 = 17711)."""
    if not KAM_CRITERIA_AVAILABLE:
        pytest.skip("kam_criteria not available")
    return preset_config("golden_small")


def _solve_small(amplitude_scale: float):
    config = preset_config("golden_small", amplitude_scale=amplitude_scale)
    alpha = config.build_alpha()
    return minimal_window(config.build_twist(alpha), alpha, config.M, seed=0, n_bar_max=16)


@pytest.fixture(scope="session")
def golden_window():
    """Solved golden_small window, amplitude 1e-3."""
    if not KAM_CRITERIA_AVAILABLE:
        pytest.skip("kam_criteria not available")
    return _solve_small(1e-3)


@pytest.fixture(scope="session")
def rigid_window():
    """Solved golden_small window with the potential switched off."""
    if not KAM_CRITERIA_AVAILABLE:
        pytest.skip("kam_criteria not available")
    return _solve_small(0.0)


@pytest.fixture(scope="session")
def small_record():
    """Full pipeline record of the golden_small preset."""
    if not KAM_CRITERIA_AVAILABLE:
        pytest.skip("kam_criteria not available")
    from kam_criteria.pipeline import run_criteria

    return run_criteria(preset_config("golden_small"))


@pytest.fixture
def tmp_store(tmp_path):
    """Empty record store under the test's temporary directory."""
    if not KAM_CRITERIA_AVAILABLE:
        pytest.skip("kam_criteria not available")
    from kam_criteria.store import RecordStore

    return RecordStore(tmp_path / "runs" / "records")


@pytest.fixture(scope="session")
def small_control_record():
    """Full pipeline record of the golden_small_control preset (amplitude 1.0)."""
    if not KAM_CRITERIA_AVAILABLE:
        pytest.skip("kam_criteria not available")
    from kam_criteria.pipeline import run_criteria

    return run_criteria(preset_config("golden_small_control"))
