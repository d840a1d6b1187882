"""
Unit tests for the framework data sources feeding the sandbox.

Every source is gated by the user, admin and permission controls before
anything reaches the store.
"""

import json

import pytest

from app.models.data import DataCategory, DataSource
from app.models.record import ControlState
from app.models.sources import (
    AppLaunchEvent,
    AppSearchDoc,
    AudioFrame,
    AudioSource,
    CameraFrame,
    CapturePolicy,
    ContactEntry,
    DropReason,
    LocationFix,
    NotificationEvent,
    ScreenshotEvent,
    ShortcutEvent,
)
from app.services.sources.ingestion_service import control_gate, decode_audio_payload, encode_audio_payload
from tests.fixtures import MESSENGER_PACKAGE, ContentCaptureFactory


@pytest.mark.unit
class TestControlGate:
    """Tests for control_gate."""

    @pytest.mark.parametrize(
        "controls, source, expected",
        [
            (ControlState(mic_enabled=False), DataSource.MICROPHONE, DropReason.SENSOR_TOGGLE),
            (ControlState(camera_enabled=False), DataSource.CAMERA, DropReason.SENSOR_TOGGLE),
            (
                ControlState(revoked_runtime_permissions=frozenset({"android.permission.ACCESS_FINE_LOCATION"})),
                DataSource.LOCATION_PROVIDER,
                DropReason.PERMISSION_REVOKED,
            ),
            (ControlState(personalize_using_app_data=False), DataSource.APP_LAUNCHES, DropReason.USER_CONTROL),
            (ControlState(screen_capture_policy_disabled=True), DataSource.SCREENSHOT, DropReason.ADMIN_POLICY),
            (ControlState(mic_enabled=False), DataSource.FRAMEWORK_AUDIO, None),
            (ControlState(personalize_using_app_data=False), DataSource.MICROPHONE, None),
        ],
    )
    def test_gate_outcomes(self, controls, source, expected):
        # Act & Assert
        assert control_gate(source, controls) == expected

    def test_sensor_toggle_before_permission(self):
        """With the mic off and RECORD_AUDIO revoked, the toggle is reported."""
        # Arrange
        controls = ControlState(
            mic_enabled=False, revoked_runtime_permissions=frozenset({"android.permission.RECORD_AUDIO"})
        )

        # Act & Assert
        assert control_gate(DataSource.MICROPHONE, controls) == DropReason.SENSOR_TOGGLE


@pytest.mark.unit
class TestContentCapture:
    def test_stored_as_raw_text_screen_capture(self, ingestion, store, default_controls, sample_capture):
        # Act
        result = ingestion.ingest_content_capture(sample_capture, default_controls)

        # Assert
        assert result.stored
        record = store.get_record(result.record_id)
        assert record.descriptor.category == DataCategory.RAW
        assert record.descriptor.source == DataSource.SCREEN_CAPTURE
        assert record.descriptor.origin_package == MESSENGER_PACKAGE
        assert record.locus_id == "thread-42"
        assert json.loads(record.payload)["structured_fields"]["entity_1"] == "Sounds good"

    def test_flag_secure_dominates(self, ingestion, store):
        """FLAG_SECURE wins even over a disabled personalization toggle."""
        # Arrange
        capture = ContentCaptureFactory.build(flag_secure=True, app_opt_out=True)
        controls = ControlState(personalize_using_app_data=False)

        # Act
        result = ingestion.ingest_content_capture(capture, controls)

        # Assert
        assert result.dropped == DropReason.FLAG_SECURE
        assert store.count() == 0

    def test_app_opt_out(self, ingestion, default_controls):
        # Act
        result = ingestion.ingest_content_capture(ContentCaptureFactory.build(app_opt_out=True), default_controls)

        # Assert
        assert result.dropped == DropReason.APP_OPT_OUT

    def test_personalize_off(self, ingestion, sample_capture):
        # Act
        result = ingestion.ingest_content_capture(sample_capture, ControlState(personalize_using_app_data=False))

        # Assert
        assert result.dropped == DropReason.USER_CONTROL

    def test_admin_policy(self, ingestion, sample_capture):
        # Act
        result = ingestion.ingest_content_capture(sample_capture, ControlState(screen_capture_policy_disabled=True))

        # Assert
        assert result.dropped == DropReason.ADMIN_POLICY

    def test_custom_ttl(self, ingestion, store, default_controls, sample_capture):
        # Act
        result = ingestion.ingest_content_capture(sample_capture, default_controls, ttl=500)

        # Assert
        assert store.get_record(result.record_id).ttl == 500


@pytest.mark.unit
class TestOtherOsSources:
    def test_share_data_keeps_locus(self, ingestion, store, default_controls):
        # Act
        result = ingestion.ingest_share_data(MESSENGER_PACKAGE, b'{"k":"v"}', "share-1", default_controls)

        # Assert
        record = store.get_record(result.record_id)
        assert record.descriptor.source == DataSource.APP_PUSHED
        assert record.locus_id == "share-1"

    def test_screenshot_flag_secure(self, ingestion):
        # Act
        result = ingestion.ingest_screenshot(
            ScreenshotEvent(app=MESSENGER_PACKAGE, image=b"png", flag_secure=True), ControlState()
        )

        # Assert
        assert result.dropped == DropReason.FLAG_SECURE

    def test_notification(self, ingestion, store, default_controls):
        # Act
        result = ingestion.ingest_notification(
            NotificationEvent(app=MESSENGER_PACKAGE, title="Ana", text="Lunch?"), default_controls
        )

        # Assert
        assert store.get_record(result.record_id).descriptor.source == DataSource.NOTIFICATION_CONTENT

    def test_contact_needs_read_contacts(self, ingestion):
        # Arrange
        controls = ControlState(revoked_runtime_permissions=frozenset({"android.permission.READ_CONTACTS"}))

        # Act
        result = ingestion.ingest_contact(ContactEntry(display_name="Ana"), controls)

        # Assert
        assert result.dropped == DropReason.PERMISSION_REVOKED

    def test_contact_origin_is_contacts_provider(self, ingestion, store, default_controls):
        # Act
        result = ingestion.ingest_contact(ContactEntry(display_name="Ana", phone="555"), default_controls)

        # Assert
        assert store.get_record(result.record_id).descriptor.origin_package == "com.android.providers.contacts"

    def test_app_launch_origin_is_the_app(self, ingestion, store, default_controls):
        # Act
        result = ingestion.ingest_app_launch(AppLaunchEvent(app="com.example.maps"), default_controls)

        # Assert
        record = store.get_record(result.record_id)
        assert record.descriptor.source == DataSource.APP_LAUNCHES
        assert record.descriptor.origin_package == "com.example.maps"

    def test_shortcut_gated_by_personalize(self, ingestion):
        # Act
        result = ingestion.ingest_shortcut(
            ShortcutEvent(app=MESSENGER_PACKAGE, shortcut_id="compose"), ControlState(personalize_using_app_data=False)
        )

        # Assert
        assert result.dropped == DropReason.USER_CONTROL


@pytest.mark.unit
class TestAmbientSources:
    def test_framework_audio_honours_capture_policy(self, ingestion, default_controls):
        # Arrange
        frame = AudioFrame(source=AudioSource.FRAMEWORK_AUDIO, capture_policy=CapturePolicy.ALLOW_CAPTURE_BY_NONE)

        # Act
        result = ingestion.capture_audio(frame, default_controls)

        # Assert
        assert result.dropped == DropReason.APP_OPT_OUT

    def test_microphone_ignores_capture_policy(self, ingestion, store, default_controls):
        # Arrange
        frame = AudioFrame(source=AudioSource.MICROPHONE, capture_policy=CapturePolicy.ALLOW_CAPTURE_BY_NONE)

        # Act
        result = ingestion.capture_audio(frame, default_controls)

        # Assert
        assert store.get_record(result.record_id).descriptor.source == DataSource.MICROPHONE

    def test_microphone_toggle(self, ingestion):
        # Act
        result = ingestion.capture_audio(AudioFrame(source=AudioSource.MICROPHONE), ControlState(mic_enabled=False))

        # Assert
        assert result.dropped == DropReason.SENSOR_TOGGLE

    def test_audio_payload_carries_label(self, ingestion, store, default_controls):
        # Arrange
        frame = AudioFrame(source=AudioSource.FRAMEWORK_AUDIO, samples=b"\x00\x01", label="hello world")

        # Act
        result = ingestion.capture_audio(frame, default_controls)

        # Assert
        assert decode_audio_payload(store.get(result.record_id)) == ("hello world", b"\x00\x01")
        assert store.get(result.record_id) == encode_audio_payload(frame)

    def test_camera_frames_stored_without_face(self, ingestion, store, default_controls):
        """Gating is content independent."""
        # Act
        result = ingestion.capture_camera(CameraFrame(face_present=False, timestamp=10), default_controls)

        # Assert
        record = store.get_record(result.record_id)
        assert record.descriptor.origin_package == "android.hardware.camera"
        assert json.loads(record.payload) == {"face_present": False, "timestamp": 10}

    def test_camera_toggle(self, ingestion):
        # Act
        result = ingestion.capture_camera(
            CameraFrame(face_present=True, timestamp=0), ControlState(camera_enabled=False)
        )

        # Assert
        assert result.dropped == DropReason.SENSOR_TOGGLE

    def test_location(self, ingestion, store, default_controls):
        # Act
        result = ingestion.capture_location(LocationFix(latitude=64.1, longitude=-21.9), default_controls)

        # Assert
        assert store.get_record(result.record_id).descriptor.source == DataSource.LOCATION_PROVIDER


@pytest.mark.unit
class TestAppSearch:
    def _index(self, ingestion):
        ingestion.appsearch_put(AppSearchDoc(app=MESSENGER_PACKAGE, doc_id="1", body={"title": "Team lunch Friday"}))
        ingestion.appsearch_put(
            AppSearchDoc(app=MESSENGER_PACKAGE, doc_id="2", body={"title": "lunch plans"}, share_with_pcc=False)
        )

    def test_sandbox_sees_shared_docs_only(self, ingestion, default_controls):
        # Arrange
        self._index(ingestion)

        # Act
        hits = ingestion.appsearch_query("lunch", controls=default_controls)

        # Assert
        assert [doc.doc_id for doc in hits] == ["1"]

    def test_terms_are_case_sensitive_whole_tokens(self, ingestion, default_controls):
        # Arrange
        self._index(ingestion)

        # Act
        capitalized = ingestion.appsearch_query("Team lunch", controls=default_controls)
        partial = ingestion.appsearch_query("lun", sandbox_caller=False)

        # Assert
        assert [doc.doc_id for doc in capitalized] == ["1"]
        assert partial == []

    def test_non_sandbox_caller_sees_everything(self, ingestion):
        # Arrange
        self._index(ingestion)

        # Act
        hits = ingestion.appsearch_query("lunch", sandbox_caller=False)

        # Assert
        assert [doc.doc_id for doc in hits] == ["1", "2"]

    def test_personalize_off_hides_index_from_sandbox(self, ingestion):
        # Arrange
        self._index(ingestion)

        # Act
        hits = ingestion.appsearch_query("Team", controls=ControlState(personalize_using_app_data=False))

        # Assert
        assert hits == []

    def test_repeat_put_replaces(self, ingestion):
        # Arrange
        ingestion.appsearch_put(AppSearchDoc(app=MESSENGER_PACKAGE, doc_id="1", body={"t": "old"}))

        # Act
        ingestion.appsearch_put(AppSearchDoc(app=MESSENGER_PACKAGE, doc_id="1", body={"t": "new"}))

        # Assert
        assert ingestion.appsearch_query("old", sandbox_caller=False) == []
        assert len(ingestion.appsearch_query("new", sandbox_caller=False)) == 1
