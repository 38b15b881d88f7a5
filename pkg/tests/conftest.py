import numpy as np
import pytest


def pytest_addoption(parser):
    parser.addoption("--skip-slow", action="store_true", help="skip long convergence sweeps")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--skip-slow"):
        skip = pytest.mark.skip(reason="--skip-slow given")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def h_inlet(z):
    return (z.imag + 1) ** 2
