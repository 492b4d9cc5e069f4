"""
Pytest configuration and shared fixtures for the effham tests.

This file contains shared test fixtures, configurations, and utilities
that can be used across all test files in the project.
"""

import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to Python path
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

os.environ.setdefault("EFFHAM_ENVIRONMENT", "testing")

from effham.cqed import CqedParams  # noqa: E402
from effham.settings import reload_config  # noqa: E402


@pytest.fixture
def rng():
    """Seeded numpy Generator."""
    return np.random.default_rng(20211014)


@pytest.fixture
def project_root():
    """Return the project root directory."""
    return PROJECT_ROOT


@pytest.fixture
def fig3_params():
    """Duffing qubits near resonance: g1 = g2 = sqrt(2) * 0.1 GHz in the two-excitation block."""
    return CqedParams(omega1=0.0, omega2=0.0, alpha1=-0.3, alpha2=-0.3, g=0.1, levels=3)


@pytest.fixture
def fig4_alpha():
    return -0.33


@pytest.fixture
def fig4_point(fig4_alpha):
    """Quasi-dispersive point on the Delta_- = 0.4 |alpha| cut."""
    return CqedParams.quasi_dispersive(-0.5, 0.4 * abs(fig4_alpha), fig4_alpha, 0.05)


@pytest.fixture
def fig5_params():
    """Cross-resonance drive; omega1 - omega2 = 60 MHz, g = -3 MHz."""
    return CqedParams(omega1=0.06, omega2=0.0, alpha1=-0.33, alpha2=-0.33, g=-0.003, levels=4)


@pytest.fixture
def dispersive_points():
    """Ten weakly coupled points away from every resonance."""
    points = []
    for i in range(10):
        delta_plus = -1.6 - 0.08 * i
        delta_minus = 0.05 + 0.01 * i
        points.append(CqedParams.quasi_dispersive(delta_plus, delta_minus, -0.33, 0.02))
    return points


@pytest.fixture
def output_dir(tmp_path):
    """Temporary directory for CLI artifacts."""
    out = tmp_path / "results"
    out.mkdir()
    return out


@pytest.fixture(autouse=True)
def setup_test_environment(monkeypatch):
    """Run every test from the project root with the testing configuration."""
    original_cwd = os.getcwd()
    os.chdir(PROJECT_ROOT)
    monkeypatch.setenv("EFFHAM_ENVIRONMENT", "testing")
    monkeypatch.delenv("EFFHAM_THREADS", raising=False)
    reload_config()

    yield

    os.chdir(original_cwd)


# Pytest configuration
def pytest_configure(config):
    """Configure pytest with custom markers and settings."""
    config.addinivalue_line(
        "markers", "unit: marks tests as unit tests"
    )
    config.addinivalue_line(
        "markers", "integration: marks tests as integration tests"
    )
    config.addinivalue_line(
        "markers", "slow: marks tests as slow running"
    )


def pytest_collection_modifyitems(config, items):
    """Automatically mark tests based on their location."""
    for item in items:
        # Mark tests in unit/ directory as unit tests
        if "tests/unit" in str(item.fspath):
            item.add_marker(pytest.mark.unit)

        # Mark tests in integration/ directory as integration tests
        elif "tests/integration" in str(item.fspath):
            item.add_marker(pytest.mark.integration)

        # Mark tests that contain "slow" in name as slow
        if "slow" in item.name.lower():
            item.add_marker(pytest.mark.slow)
