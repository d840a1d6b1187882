"""
Unit test fixtures: one simulated device built from in-memory services.

Unit tests should be:
- Fast (< 5s total)
- Isolated (no shipped scenarios, no fleet)
- Deterministic (explicit clock, explicit seeds)
"""

import pytest

from app.models.egress import PopulationHistogram
from app.repositories.audit_repository import AuditRepository
from app.repositories.package_repository import PackageRepository
from app.services.gateway.gateway_service import GatewayService
from app.services.sandbox.clock import SimClock
from app.services.sandbox.ephemeral_store import EphemeralStoreService
from app.services.sandbox.ipc_broker import IpcBroker
from app.services.sandbox.process_manager import ProcessManager
from app.services.sources.ingestion_service import IngestionService
from tests.fixtures import ManifestFactory

# ============================================================================
# Sandbox Runtime
# ============================================================================


@pytest.fixture
def clock():
    """Simulated clock at t=0."""
    return SimClock()


@pytest.fixture
def audit_repo():
    return AuditRepository()


@pytest.fixture
def packages(asi_manifest, pcs_manifest):
    """Registry holding the sandbox package, its network companion and a messenger app."""
    repo = PackageRepository()
    repo.register(asi_manifest)
    repo.register(pcs_manifest)
    repo.register(ManifestFactory.build_messenger())
    return repo


@pytest.fixture
def store(clock):
    return EphemeralStoreService(clock)


@pytest.fixture
def ingestion(store):
    return IngestionService(store)


@pytest.fixture
def processes(packages, clock):
    return ProcessManager(packages, clock)


@pytest.fixture
def broker(packages, association_rules, audit_repo, clock):
    """IPC broker with the default association table and a small FrameworkApi budget."""
    return IpcBroker(packages, association_rules, audit_repo, clock, rate_limit=3, device="phone")


# ============================================================================
# Gateway
# ============================================================================


@pytest.fixture
def locale_histogram():
    """Five devices: en-US on four of them, is-IS on one."""
    return PopulationHistogram(counts={b"locale:en-US": 4, b"locale:is-IS": 1}, device_count=5)


@pytest.fixture
def gateway(packages, shipped_policies, audit_repo, clock, locale_histogram):
    return GatewayService(packages, shipped_policies, audit_repo, clock, locale_histogram, device="phone")
