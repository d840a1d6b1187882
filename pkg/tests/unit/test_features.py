"""
Unit tests for the in-sandbox features: Smart Reply, Live Caption,
Screen Attention and Now Playing.
"""

import hashlib
import random

import pytest

from app.implementations import PaillierScheme
from app.models.data import DataCategory, DataSource
from app.models.egress import DownloadEntry, DownloadManifest
from app.models.features import DimOutcome, SurfaceKind
from app.models.record import ControlState
from app.models.sources import AudioFrame, AudioSource, CameraFrame, CapturePolicy
from app.services.features.feature_host import FeatureHost
from app.services.features.live_caption import LiveCaptionService, live_caption
from app.services.features.now_playing import NowPlayingService
from app.services.features.screen_attention import ScreenAttentionService
from app.services.features.smart_reply import SmartReplyService, smart_reply_suggest
from app.services.gateway.download_transport import DownloadOnlyTransport, ModelServer
from app.services.pir.client import PirClient
from app.services.pir.database import PirDatabase
from app.services.pir.server import PirServer
from tests.fixtures import MESSENGER_PACKAGE, ContentCaptureFactory

ASI = "com.google.android.as"


def _audio(label: str | None, policy: CapturePolicy = CapturePolicy.ALLOW_ALL) -> AudioFrame:
    return AudioFrame(source=AudioSource.FRAMEWORK_AUDIO, samples=b"\x01\x02", label=label, capture_policy=policy)


@pytest.mark.unit
class TestSmartReply:
    """Suggestions come from live captures of allowlisted apps only."""

    def test_entities_become_candidates(self, ingestion, store, default_controls, sample_capture):
        # Arrange
        ingestion.ingest_content_capture(sample_capture, default_controls)

        # Act
        candidates = SmartReplyService(store, [MESSENGER_PACKAGE]).suggest()

        # Assert
        assert [c.text for c in candidates] == ["Sounds good", "See you at 7"]
        assert {c.source_locus for c in candidates} == {"thread-42"}
        record = store.get_record(candidates[0].record_id)
        assert record.descriptor.category == DataCategory.DERIVED
        assert record.descriptor.source == DataSource.SCREEN_CAPTURE
        assert record.descriptor.origin_package == ASI

    def test_duplicates_collapse(self, ingestion, store, default_controls):
        # Arrange
        ingestion.ingest_content_capture(ContentCaptureFactory.build(), default_controls)
        ingestion.ingest_content_capture(ContentCaptureFactory.build(), default_controls)

        # Act
        candidates = smart_reply_suggest(store, [MESSENGER_PACKAGE])

        # Assert
        assert [c.text for c in candidates] == ["Sounds good", "See you at 7"]

    def test_app_not_allowlisted(self, ingestion, store, default_controls, sample_capture):
        # Arrange
        ingestion.ingest_content_capture(sample_capture, default_controls)

        # Act & Assert
        assert SmartReplyService(store, ["com.example.other"]).suggest() == []

    def test_flag_secure_never_suggested(self, ingestion, store, default_controls):
        # Arrange
        ingestion.ingest_content_capture(ContentCaptureFactory.build(flag_secure=True), default_controls)

        # Act & Assert
        assert SmartReplyService(store, [MESSENGER_PACKAGE]).suggest() == []

    def test_expired_captures_ignored(self, ingestion, store, clock, default_controls, sample_capture):
        # Arrange
        ingestion.ingest_content_capture(sample_capture, default_controls, ttl=100)
        clock.advance_to(101)

        # Act & Assert
        assert SmartReplyService(store, [MESSENGER_PACKAGE]).suggest() == []

    def test_locus_deletion_removes_suggestions(self, ingestion, store, default_controls, sample_capture):
        # Arrange
        ingestion.ingest_content_capture(sample_capture, default_controls)
        SmartReplyService(store, [MESSENGER_PACKAGE]).suggest()

        # Act
        removed = store.delete_by_locus("thread-42")

        # Assert
        assert removed == 3
        assert store.count() == 0

    def test_runs_inside_feature_process(self, processes, ingestion, store, default_controls, sample_capture):
        # Arrange
        host = FeatureHost(processes, ASI)
        ingestion.ingest_content_capture(sample_capture, default_controls)

        # Act
        SmartReplyService(store, [MESSENGER_PACKAGE], host=host).suggest()

        # Assert
        assert processes.is_valid(host.handle())


@pytest.mark.unit
class TestLiveCaption:
    def test_one_line_per_recognized_frame(self, ingestion, default_controls):
        # Act
        overlay = LiveCaptionService(ingestion).caption(
            [_audio("hello world"), _audio(None), _audio("how are you")], default_controls
        )

        # Assert
        assert overlay.lines == ["hello world", "how are you"]
        assert overlay.surface == SurfaceKind.SYSTEM_OVERLAY

    def test_disabled_captures_nothing(self, ingestion, store, default_controls):
        # Act
        overlay = live_caption([_audio("hello")], default_controls, ingestion, enabled=False)

        # Assert
        assert overlay is None
        assert store.count() == 0

    def test_app_opt_out_frames_skipped(self, ingestion, default_controls):
        # Act
        overlay = live_caption(
            [_audio("secret", CapturePolicy.ALLOW_CAPTURE_BY_NONE), _audio("public")], default_controls, ingestion
        )

        # Assert
        assert overlay.lines == ["public"]

    def test_captions_stored_as_derived(self, ingestion, store, default_controls):
        # Act
        live_caption([_audio("hello")], default_controls, ingestion)

        # Assert
        derived = [r for r in store.live_records() if r.descriptor.category == DataCategory.DERIVED]
        assert [r.payload for r in derived] == [b"hello"]

    def test_model_fetched_on_start(self, ingestion, audit_repo, clock):
        # Arrange
        blob = b"caption model"
        manifest = DownloadManifest(entries=[DownloadEntry(uri="models/cap", sha256=hashlib.sha256(blob).hexdigest())])
        transport = DownloadOnlyTransport(manifest, ModelServer({"models/cap": blob}), audit_repo, clock)
        service = LiveCaptionService(ingestion, transport, model_uri="models/cap")

        # Act
        result = service.start()

        # Assert
        assert result.decision.allowed
        assert service.model == blob
        assert audit_repo.get_all()[0].feature == "live_caption"

    def test_start_without_transport(self, ingestion):
        assert LiveCaptionService(ingestion).start() is None


@pytest.mark.unit
class TestScreenAttention:
    """Postpone iff the latest admitted frame in [t - 2000, t] shows a face."""

    def test_face_in_window_postpones(self, ingestion, default_controls):
        # Arrange
        service = ScreenAttentionService(ingestion)

        # Act
        decision = service.decide(5000, default_controls, True, [CameraFrame(face_present=True, timestamp=4000)])

        # Assert
        assert decision.outcome == DimOutcome.POSTPONE
        assert decision.at == 5000

    def test_latest_frame_decides(self, ingestion, default_controls):
        # Arrange
        frames = [CameraFrame(face_present=True, timestamp=3500), CameraFrame(face_present=False, timestamp=4500)]

        # Act
        decision = ScreenAttentionService(ingestion).decide(5000, default_controls, True, frames)

        # Assert
        assert decision.outcome == DimOutcome.DIM

    @pytest.mark.parametrize("timestamp, expected", [(3000, DimOutcome.POSTPONE), (2999, DimOutcome.DIM)])
    def test_window_bounds_inclusive(self, ingestion, default_controls, timestamp, expected):
        # Act
        decision = ScreenAttentionService(ingestion).decide(
            5000, default_controls, True, [CameraFrame(face_present=True, timestamp=timestamp)]
        )

        # Assert
        assert decision.outcome == expected

    def test_not_opted_in_is_inert(self, ingestion, store, default_controls):
        # Act
        decision = ScreenAttentionService(ingestion).decide(
            5000, default_controls, False, [CameraFrame(face_present=True, timestamp=5000)]
        )

        # Assert
        assert decision.outcome == DimOutcome.DIM
        assert store.count() == 0

    def test_camera_toggle_off(self, ingestion):
        # Act
        decision = ScreenAttentionService(ingestion).decide(
            5000, ControlState(camera_enabled=False), True, [CameraFrame(face_present=True, timestamp=5000)]
        )

        # Assert
        assert decision.outcome == DimOutcome.DIM

    def test_has_no_network_path(self, ingestion):
        # Arrange
        service = ScreenAttentionService(ingestion)

        # Act & Assert
        assert not any(hasattr(service, name) for name in ("gateway", "transport", "broker"))


@pytest.fixture(scope="module")
def paillier():
    return PaillierScheme(256)


@pytest.fixture
def now_playing(ingestion, gateway, paillier):
    database = PirDatabase.from_mapping(
        {"song-001": b"Blue Monday", "song-002": b"Clair", "song-003": b"Teardrop"}, record_size=12, limb_size=8
    )
    client = PirClient(paillier, random.Random(42), record_size=12, limb_size=8)
    return NowPlayingService(ingestion, gateway, PirServer(database, paillier), client)


@pytest.mark.unit
class TestNowPlaying:
    def test_matches_song_over_pir(self, now_playing, default_controls):
        # Act
        match = now_playing.listen(_audio("song-002"), default_controls)

        # Assert
        assert (match.song_id, match.title) == ("song-002", "Clair")
        assert match.surface == SurfaceKind.LOCK_SCREEN
        (exchange,) = now_playing.exchanges
        assert (exchange.scalar_mul, exchange.add) == (6, 4)

    def test_query_size_independent_of_song(self, now_playing, default_controls):
        # Act
        now_playing.listen(_audio("song-001"), default_controls)
        now_playing.listen(_audio("song-003"), default_controls)

        # Assert
        first, second = now_playing.exchanges
        assert first.query_bytes == second.query_bytes
        assert first.query_digest != second.query_digest

    def test_query_leaves_through_gateway(self, now_playing, audit_repo, default_controls):
        # Act
        now_playing.listen(_audio("song-001"), default_controls)

        # Assert
        (event,) = audit_repo.get_all()
        assert (event.channel, event.decision, event.feature) == ("PirQuery", "Allow", "now_playing")
        assert event.bytes_out == now_playing.exchanges[0].query_bytes

    def test_unknown_song(self, now_playing, audit_repo, default_controls):
        # Act & Assert
        assert now_playing.listen(_audio("song-404"), default_controls) is None
        assert audit_repo.count() == 0

    def test_dropped_frame(self, now_playing, default_controls):
        # Act & Assert
        assert now_playing.listen(_audio("song-001", CapturePolicy.ALLOW_CAPTURE_BY_NONE), default_controls) is None

    def test_denied_lookup(self, ingestion, gateway, now_playing, default_controls):
        # Arrange
        service = NowPlayingService(
            ingestion, gateway, now_playing.server, now_playing.client, policy_id="framework_surface"
        )

        # Act
        match = service.listen(_audio("song-001"), default_controls)

        # Assert
        assert match is None
        assert service.exchanges == []
        assert now_playing.server.queries_answered == 0
