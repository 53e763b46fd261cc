import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from schemas.treasure import AgentConfig, ScenarioConfig  # noqa: E402
from tools.relinfo import symmetric_strategy  # noqa: E402

# hit fraction of a calibrated non-social searcher among 10 locations
CALIBRATED_HIT = 0.18028


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run desk-scale scenario checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale scenario check, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def likelihood():
    """Symmetric P(A|T) with the calibrated hit fraction"""
    return symmetric_strategy(CALIBRATED_HIT, 10)


def make_config(agents, **kwargs) -> ScenarioConfig:
    values = dict(n_locations=10, n_agents=len(agents), turns=100, runs=2, seed=7,
                  calibration_samples=10_000)
    values.update(kwargs)
    return ScenarioConfig(agents=agents, **values)


@pytest.fixture
def config_factory():
    return make_config


@pytest.fixture
def non_social():
    return AgentConfig()
