"""
E2E test fixtures with the click CLI and the FastAPI HTTP client.

E2E tests verify the full application stack:
- The `pcc-sim` command group via click's CliRunner (stdout and stderr kept apart)
- The FastAPI app via httpx AsyncClient over ASGITransport
- Full request/response cycle, exit codes and status codes

Scope Strategy:
- All fixtures: function-scoped (maximum isolation)
- AsyncClient: Fresh client per test
"""

import os

# Force E2E test environment
os.environ["TEST_TYPE"] = "e2e"

# ruff: noqa: E402
# Imports must come after environment variable setup for proper test configuration
import json

import pytest
import pytest_asyncio
from click.testing import CliRunner
from httpx import ASGITransport, AsyncClient

from app.cli import cli
from main import app

# ============================================================================
# CLI Fixtures
# ============================================================================


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def invoke(runner):
    """Invoke `pcc-sim` with the given arguments."""

    def _invoke(*args: str):
        return runner.invoke(cli, [str(arg) for arg in args])

    return _invoke


@pytest.fixture
def association_path(data_dir):
    return data_dir / "associations" / "default_associations.xml"


@pytest.fixture
def scenario_path(data_dir):
    """Path of a shipped scenario by name."""

    def _path(name: str):
        return data_dir / "scenarios" / f"{name}.json"

    return _path


@pytest.fixture
def minimal_document(scenario_path) -> dict:
    return json.loads(scenario_path("minimal").read_text(encoding="utf-8"))


# ============================================================================
# FastAPI HTTP Client Fixtures
# ============================================================================


@pytest_asyncio.fixture
async def async_client():
    """
    Async HTTP client for E2E testing.

    Dependency overrides set by a test are cleared afterwards.
    """
    transport = ASGITransport(app=app)
    async with AsyncClient(transport=transport, base_url="http://testserver") as client:
        yield client

    app.dependency_overrides.clear()
