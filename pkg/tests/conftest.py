"""
Pytest configuration and fixtures for chordlab testing
"""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from src.api.server import create_app
from src.core.config import Settings
from src.diagrams.literal import parse_diagram
from src.series.ring import Truncation


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive oracle sweeps")


@pytest.fixture
def settings():
    """Default settings, independent of the environment."""
    return Settings()


@pytest.fixture
def test_app(settings):
    """Create a test instance of the chordlab application."""
    app = create_app(settings)
    return app


@pytest.fixture
def client(test_app):
    """Create a test client for the chordlab application."""
    with TestClient(test_app) as test_client:
        yield test_client


@pytest.fixture
def one_chord():
    return parse_diagram("backbones=[CC] chords=[(0.0-0.1,u)]")


@pytest.fixture
def mobius():
    return parse_diagram("backbones=[CC] chords=[(0.0-0.1,t)]")


@pytest.fixture
def crossing():
    """The genus-one pairing of four chord ends on one backbone."""
    return parse_diagram("backbones=[CCCC] chords=[(0.0-0.2,u),(0.1-0.3,u)]")


@pytest.fixture
def small_truncation():
    return Truncation(y_max=2, b_max=2, m_max=4)


@pytest.fixture
def rng():
    return np.random.default_rng(7)
