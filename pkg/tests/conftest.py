"""
Global test configuration and fixtures.

This module contains ONLY global, test-agnostic fixtures that are shared
across ALL test types (unit/integration/e2e).

Test-specific fixtures are located in their respective conftest.py files:
- tests/unit/conftest.py        - Unit test fixtures (one device, in-memory services)
- tests/integration/conftest.py - Integration test fixtures (shipped scenarios, fleets)
- tests/e2e/conftest.py         - E2E test fixtures (CliRunner + FastAPI HTTP client)
"""

from pathlib import Path

import pytest

from app.core.config import settings
from app.models.record import ControlState
from app.services.gateway.policy_loader import load_policy_directory, merge_policies
from app.services.policy.association_parser import parse_association_config
from tests.fixtures import ContentCaptureFactory, ManifestFactory

# ============================================================================
# Shipped Data (No Simulator State)
# ============================================================================


@pytest.fixture(scope="session")
def data_dir() -> Path:
    """Directory with the shipped manifests, association configs, policies and scenarios."""
    return settings.data_dir


@pytest.fixture(scope="session")
def association_text(data_dir) -> str:
    return (data_dir / "associations" / "default_associations.xml").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def association_rules(association_text):
    """Parsed default association rules."""
    return parse_association_config(association_text)


@pytest.fixture(scope="session")
def shipped_policies(data_dir):
    """Shipped egress policies indexed by id."""
    return merge_policies(load_policy_directory(data_dir / "policies"))


# ============================================================================
# Sample Data Fixtures
# ============================================================================


@pytest.fixture
def default_controls() -> ControlState:
    """Every toggle on, nothing revoked."""
    return ControlState()


@pytest.fixture
def asi_manifest():
    return ManifestFactory.build_asi()


@pytest.fixture
def pcs_manifest():
    return ManifestFactory.build_pcs()


@pytest.fixture
def sample_capture():
    """Chat capture with two reply entities."""
    return ContentCaptureFactory.build(locus_id="thread-42")
