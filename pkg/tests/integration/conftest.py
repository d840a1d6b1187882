"""
Integration test fixtures: shipped scenarios run through the full simulator.

Integration tests verify:
- Shipped scenario documents load against the shipped manifests and policies
- Every subsystem cooperating on one fleet clock and one audit log
- Determinism of the run report for a fixed seed
- NO CLI or HTTP layer (use E2E tests for that)

Scope Strategy:
- Loaded scenarios: session-scoped (validation is pure)
- Reports: session-scoped per (name, seed); runs never mutate the loaded scenario
"""

import os

import pytest

from app.services.fleet.scenario_loader import load_scenario
from app.services.fleet.simulator import run_scenario

# Force integration test environment
os.environ["TEST_TYPE"] = "integration"


@pytest.fixture(scope="session")
def load_shipped(data_dir):
    """Load a shipped scenario by name, caching the validated result."""
    cache = {}

    def _load(name: str):
        if name not in cache:
            cache[name] = load_scenario(data_dir / "scenarios" / f"{name}.json")
        return cache[name]

    return _load


@pytest.fixture(scope="session")
def run_shipped(load_shipped):
    """Run a shipped scenario, optionally overriding its seed."""
    reports = {}

    def _run(name: str, seed: int | None = None):
        key = (name, seed)
        if key not in reports:
            reports[key] = run_scenario(load_shipped(name), seed=seed)
        return reports[key]

    return _run


@pytest.fixture
def device_summary():
    """Find one device's summary in a report."""

    def _find(report, name: str):
        return next(device for device in report.devices if device.name == name)

    return _find
