import pytest

from bucketwheel import Scenario, run


@pytest.fixture(scope="session")
def default_scenario_fixture() -> Scenario:
    return Scenario()


@pytest.fixture(scope="session")
def default_trajectory(default_scenario_fixture):
    """One stock 100 s run, shared across the suite.

    The first call also pays the jit compilation cost, so every other test
    sees warm kernels.
    """
    return run(default_scenario_fixture)
