from importlib import resources

import pytest

from breakglass import scenario as scenario_mod


def data_path(name: str) -> str:
    return str(resources.files("breakglass").joinpath(f"data/{name}"))


@pytest.fixture(scope="session")
def fixture_scenario():
    return scenario_mod.load("fixture")


@pytest.fixture(scope="session")
def sweep_scenario():
    return scenario_mod.load("sweep")
