"""
Pytest configuration and shared fixtures for the matching lab tests.
"""

import pytest
import sys
import os

# Add project root to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.config import LabSettings
from src.core.graph import make_graph
from src.stats.streams import derive_stream


@pytest.fixture
def rng():
    """Fresh stream with a fixed seed for each test."""
    return derive_stream(12345, 0)


@pytest.fixture
def k22():
    """K_{2,2} with w(v1,v1')=0.3, w(v1,v2')=0.1, w(v2,v1')=0.2, w(v2,v2')=0.4.

    Vertices 0, 1 are v1, v2 and 2, 3 are v1', v2'.
    """
    return make_graph("bipartite", 2).with_costs([0.3, 0.1, 0.2, 0.4])


@pytest.fixture
def k11():
    return make_graph("bipartite", 1).with_costs([0.7])


@pytest.fixture(scope="session")
def settings():
    """Built-in defaults, independent of config/simulation.yaml."""
    return LabSettings()


def pytest_configure(config):
    """Configure custom markers."""
    config.addinivalue_line("markers", "slow: marks tests as slow")
    config.addinivalue_line("markers", "integration: marks tests as integration tests")
    config.addinivalue_line("markers", "unit: marks tests as unit tests")
