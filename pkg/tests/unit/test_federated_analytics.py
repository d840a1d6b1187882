"""
Unit tests for federated analytics over secure aggregation.

Three devices take part: phone-a launched maps and the messenger, phone-b
the messenger only, phone-c music and the messenger. phone-d turned off
personalization and is excluded before the session starts.
"""

import pytest

from app.core.exceptions import SecAggAbortException
from app.models.record import ControlState
from app.models.sources import AppLaunchEvent
from app.services.gateway.federated_analytics import (
    FaParticipant,
    FederatedAnalyticsService,
    bucket_presence,
    local_vector,
)
from app.services.sandbox.ephemeral_store import EphemeralStoreService
from app.services.secagg.messages import SecAggRound
from app.services.sources.ingestion_service import IngestionService
from tests.fixtures import MESSENGER_PACKAGE, FaTaskFactory

MAPS = "com.example.maps"
MUSIC = "com.example.music"
LAUNCHES = {
    "phone-a": [MAPS, MESSENGER_PACKAGE],
    "phone-b": [MESSENGER_PACKAGE],
    "phone-c": [MUSIC, MESSENGER_PACKAGE, MESSENGER_PACKAGE],
    "phone-d": [MAPS],
}


@pytest.fixture
def participants(clock, gateway):
    """One store per device; every device reuses the fixture gateway."""
    fleet = []
    for name, apps in LAUNCHES.items():
        controls = ControlState(personalize_using_app_data=name != "phone-d")
        store = EphemeralStoreService(clock)
        ingestion = IngestionService(store)
        for app in apps:
            ingestion.ingest_app_launch(AppLaunchEvent(app=app), ControlState())
        fleet.append(FaParticipant(name=name, store=store, controls=controls, gateway=gateway))
    return fleet


@pytest.fixture
def fa_service():
    return FederatedAnalyticsService(root_seed=7, key_agreement="dealer")


@pytest.mark.unit
class TestLocalVectors:
    def test_presence_counts_each_app_once(self, participants):
        # Arrange
        task = FaTaskFactory.build()

        # Act & Assert
        assert bucket_presence(task, participants[2].store) == {MUSIC, MESSENGER_PACKAGE}
        assert local_vector(task, participants[2].store, {MUSIC, MESSENGER_PACKAGE, MAPS}).tolist() == [0, 1, 1]

    def test_unpopular_buckets_zeroed(self, participants):
        # Act
        vector = local_vector(FaTaskFactory.build(), participants[0].store, {MESSENGER_PACKAGE})

        # Assert
        assert vector.tolist() == [0, 1, 0]

    def test_window_limits_presence(self, participants, clock):
        # Arrange
        task = FaTaskFactory.build(window_ms=1000)
        clock.advance_to(5000)

        # Act & Assert
        assert bucket_presence(task, participants[0].store) == set()


@pytest.mark.unit
class TestPartition:
    def test_controls_exclude_devices(self, fa_service, participants):
        # Act
        included, excluded = fa_service.partition(FaTaskFactory.build(), participants)

        # Assert
        assert [p.name for p in included] == ["phone-a", "phone-b", "phone-c"]
        assert excluded == {"phone-d": "UserControl"}

    def test_popularity_from_included_devices(self, fa_service, participants):
        # Arrange
        task = FaTaskFactory.build(popularity_threshold=2)
        included, _ = fa_service.partition(task, participants)

        # Act & Assert
        assert fa_service.popular_buckets(task, included) == {MESSENGER_PACKAGE}


@pytest.mark.unit
class TestRunFaTask:
    """Tests for FederatedAnalyticsService.run_fa_task."""

    def test_aggregate_is_column_sum(self, fa_service, participants):
        # Act
        report = fa_service.run_fa_task(FaTaskFactory.build(task_id="app-usage"), participants)

        # Assert
        assert report.aggregate == [1, 3, 1]
        assert report.survivors == ["phone-a", "phone-b", "phone-c"]
        assert report.participants == ["phone-a", "phone-b", "phone-c"]
        assert report.excluded == {"phone-d": "UserControl"}
        assert report.aborted is None
        assert report.transcript_digest

    def test_matches_plaintext_oracle(self, fa_service, participants):
        # Arrange
        task = FaTaskFactory.build(popularity_threshold=2)

        # Act
        report = fa_service.run_fa_task(task, participants)

        # Assert
        assert report.aggregate == [0, 3, 0]
        assert report.aggregate == fa_service.plaintext_oracle(task, participants, report.survivors)

    def test_every_upload_gated(self, fa_service, participants, audit_repo):
        # Act
        fa_service.run_fa_task(FaTaskFactory.build(task_id="app-usage"), participants)

        # Assert
        events = audit_repo.query({"feature": "fa:app-usage"})
        assert len(events) == 12  # three devices, four rounds
        assert all(e.channel == "FederatedCompute" and e.allowed for e in events)

    def test_dropout_with_lower_threshold(self, participants):
        # Arrange
        service = FederatedAnalyticsService(root_seed=7, threshold_ratio=0.5, key_agreement="dealer")
        task = FaTaskFactory.build()

        # Act
        report = service.run_fa_task(task, participants, dropouts={"phone-b": SecAggRound.MASKED_INPUT})

        # Assert
        assert report.aggregate == [1, 2, 1]
        assert report.survivors == ["phone-a", "phone-c"]
        assert report.aggregate == service.plaintext_oracle(task, participants, report.survivors)

    def test_abort_propagates(self, fa_service, participants):
        """Default ratio 0.7 over three devices needs all three."""
        with pytest.raises(SecAggAbortException):
            fa_service.run_fa_task(
                FaTaskFactory.build(), participants, dropouts={"phone-b": SecAggRound.MASKED_INPUT}
            )

    def test_abort_reported(self, fa_service, participants):
        # Act
        report = fa_service.run_fa_task(
            FaTaskFactory.build(),
            participants,
            dropouts={"phone-b": SecAggRound.MASKED_INPUT},
            propagate_abort=False,
        )

        # Assert
        assert "MaskedInput" in report.aborted
        assert report.aggregate == [0, 0, 0]
        assert report.survivors_per_round["MaskedInput"] == 2

    def test_denied_uploads_abort(self, fa_service, participants, audit_repo):
        """A policy without FederatedCompute stops every message at the gateway."""
        # Act
        report = fa_service.run_fa_task(
            FaTaskFactory.build(policy_id="pir_lookup"), participants, propagate_abort=False
        )

        # Assert
        assert report.aborted is not None
        assert report.uplink_bytes == 0
        assert {e.reason for e in audit_repo.get_all()} == {"Channel"}

    def test_no_participants(self, fa_service, participants):
        # Act
        report = fa_service.run_fa_task(FaTaskFactory.build(), participants[3:])

        # Assert
        assert report.aborted == "NoParticipants"
        assert report.aggregate == [0, 0, 0]
