"""
Framework data sources feeding the sandbox.

Every ingest operation has the same shape: evaluate the gates for the event
and the current controls, then either drop with a reason or store a Raw
record with the source's descriptor.
"""

import base64
import json

import structlog

from app.core.constants import CAMERA_ORIGIN, CONTACTS_PROVIDER_PACKAGE, LOCATION_ORIGIN
from app.core.utils import canonical_json
from app.models.data import DataCategory, DataDescriptor, DataSource
from app.models.record import ControlState
from app.models.sources import (
    AppLaunchEvent,
    AppSearchDoc,
    AudioFrame,
    AudioSource,
    CameraFrame,
    CapturePolicy,
    ContactEntry,
    ContentCaptureEvent,
    DropReason,
    IngestResult,
    LocationFix,
    NotificationEvent,
    ScreenshotEvent,
    ShortcutEvent,
)
from app.repositories.appsearch_repository import AppSearchRepository, IAppSearchRepository
from app.services.sandbox.ephemeral_store import EphemeralStoreService

logger = structlog.get_logger(__name__)

# Sources restricted by the "Personalize using app data" toggle
PERSONALIZE_SOURCES = frozenset(
    {
        DataSource.SCREEN_CAPTURE,
        DataSource.SCREENSHOT,
        DataSource.APP_PUSHED,
        DataSource.APP_SEARCH_INDEXED,
        DataSource.NOTIFICATION_CONTENT,
        DataSource.APP_LAUNCHES,
        DataSource.SHORTCUTS,
    }
)

# Sources restricted by the admin screen-capture policy
ADMIN_POLICY_SOURCES = frozenset({DataSource.SCREEN_CAPTURE, DataSource.SCREENSHOT})

# Runtime permission each ambient source depends on
SOURCE_PERMISSIONS: dict[DataSource, str] = {
    DataSource.MICROPHONE: "android.permission.RECORD_AUDIO",
    DataSource.CAMERA: "android.permission.CAMERA",
    DataSource.LOCATION_PROVIDER: "android.permission.ACCESS_FINE_LOCATION",
    DataSource.CONTACTS: "android.permission.READ_CONTACTS",
}


def control_gate(source: DataSource, controls: ControlState) -> DropReason | None:
    """
    Evaluate the user, admin and permission controls for one source.

    :param source: Data source of the event
    :param controls: Current control state
    :return: Drop reason, or None if the source is admitted
    """
    if source == DataSource.MICROPHONE and not controls.mic_enabled:
        return DropReason.SENSOR_TOGGLE
    if source == DataSource.CAMERA and not controls.camera_enabled:
        return DropReason.SENSOR_TOGGLE
    permission = SOURCE_PERMISSIONS.get(source)
    if permission is not None and permission in controls.revoked_runtime_permissions:
        return DropReason.PERMISSION_REVOKED
    if source in PERSONALIZE_SOURCES and not controls.personalize_using_app_data:
        return DropReason.USER_CONTROL
    if source in ADMIN_POLICY_SOURCES and controls.screen_capture_policy_disabled:
        return DropReason.ADMIN_POLICY
    return None


def encode_audio_payload(frame: AudioFrame) -> bytes:
    """Stored audio payload: the label travels with the samples for the mock recognizer."""
    return canonical_json({"label": frame.label, "samples": base64.b64encode(frame.samples).decode("ascii")}).encode()


def decode_audio_payload(payload: bytes) -> tuple[str | None, bytes]:
    body = json.loads(payload)
    return body.get("label"), base64.b64decode(body.get("samples", ""))


class IngestionService:
    """Gate-then-store entry points for every framework data source of one device."""

    def __init__(self, store: EphemeralStoreService, appsearch_repo: IAppSearchRepository | None = None):
        self.store = store
        self.appsearch_repo = appsearch_repo or AppSearchRepository()

    def _admit(
        self,
        source: DataSource,
        origin_package: str,
        payload: bytes,
        controls: ControlState,
        locus_id: str | None = None,
        pre_gate: DropReason | None = None,
        ttl: int | None = None,
    ) -> IngestResult:
        reason = pre_gate or control_gate(source, controls)
        if reason is not None:
            logger.info("ingest_dropped", source=source.value, origin=origin_package, reason=reason.value)
            return IngestResult(dropped=reason)

        descriptor = DataDescriptor.for_source(DataCategory.RAW, source, origin_package)
        record_id = self.store.put_raw(descriptor, payload, locus_id=locus_id, ttl=ttl)
        logger.debug("ingest_stored", source=source.value, origin=origin_package, record_id=record_id)
        return IngestResult(record_id=record_id)

    def ingest_content_capture(
        self, event: ContentCaptureEvent, controls: ControlState, ttl: int | None = None
    ) -> IngestResult:
        """
        Content Capture of on-screen text. FLAG_SECURE dominates every other setting.

        :param event: Captured view text and structured fields
        :param controls: Current controls
        :return: Stored (Raw, Text, ScreenCapture) record id, or the drop reason
        """
        pre_gate = None
        if event.flag_secure:
            pre_gate = DropReason.FLAG_SECURE
        elif event.app_opt_out:
            pre_gate = DropReason.APP_OPT_OUT
        payload = canonical_json({"view_text": event.view_text, "structured_fields": event.structured_fields})
        return self._admit(
            DataSource.SCREEN_CAPTURE,
            event.app,
            payload.encode("utf-8"),
            controls,
            locus_id=event.locus_id,
            pre_gate=pre_gate,
            ttl=ttl,
        )

    def ingest_share_data(
        self, app: str, payload: bytes, locus_id: str, controls: ControlState, ttl: int | None = None
    ) -> IngestResult:
        """Structured data pushed by an app (Raw, Structured, AppPushed)."""
        return self._admit(DataSource.APP_PUSHED, app, payload, controls, locus_id=locus_id, ttl=ttl)

    def ingest_screenshot(self, event: ScreenshotEvent, controls: ControlState) -> IngestResult:
        pre_gate = DropReason.FLAG_SECURE if event.flag_secure else None
        return self._admit(DataSource.SCREENSHOT, event.app, event.image, controls, pre_gate=pre_gate)

    def ingest_notification(self, event: NotificationEvent, controls: ControlState) -> IngestResult:
        payload = canonical_json({"title": event.title, "text": event.text}).encode("utf-8")
        return self._admit(DataSource.NOTIFICATION_CONTENT, event.app, payload, controls)

    def ingest_contact(self, entry: ContactEntry, controls: ControlState) -> IngestResult:
        payload = canonical_json({"display_name": entry.display_name, "phone": entry.phone}).encode("utf-8")
        return self._admit(DataSource.CONTACTS, CONTACTS_PROVIDER_PACKAGE, payload, controls)

    def ingest_app_launch(self, event: AppLaunchEvent, controls: ControlState) -> IngestResult:
        payload = canonical_json({"app": event.app}).encode("utf-8")
        return self._admit(DataSource.APP_LAUNCHES, event.app, payload, controls)

    def ingest_shortcut(self, event: ShortcutEvent, controls: ControlState) -> IngestResult:
        payload = canonical_json({"shortcut_id": event.shortcut_id, "label": event.label}).encode("utf-8")
        return self._admit(DataSource.SHORTCUTS, event.app, payload, controls)

    def capture_audio(self, frame: AudioFrame, controls: ControlState, ttl: int | None = None) -> IngestResult:
        """
        Framework audio honours the app's capture policy; the microphone honours the sensor toggle.

        :param frame: Audio frame with optional recognizer label
        :param controls: Current controls
        :return: Stored (Raw, Audio, <source>) record id, or the drop reason
        """
        if frame.source == AudioSource.FRAMEWORK_AUDIO:
            source = DataSource.FRAMEWORK_AUDIO
            pre_gate = DropReason.APP_OPT_OUT if frame.capture_policy == CapturePolicy.ALLOW_CAPTURE_BY_NONE else None
        else:
            source = DataSource.MICROPHONE
            pre_gate = None
        return self._admit(source, frame.app, encode_audio_payload(frame), controls, pre_gate=pre_gate, ttl=ttl)

    def capture_camera(self, frame: CameraFrame, controls: ControlState, ttl: int | None = None) -> IngestResult:
        """Gating is content independent: frames without a face are stored too."""
        payload = canonical_json({"face_present": frame.face_present, "timestamp": frame.timestamp}).encode("utf-8")
        return self._admit(DataSource.CAMERA, CAMERA_ORIGIN, payload, controls, ttl=ttl)

    def capture_location(self, fix: LocationFix, controls: ControlState) -> IngestResult:
        payload = canonical_json(fix.model_dump(mode="json")).encode("utf-8")
        return self._admit(DataSource.LOCATION_PROVIDER, LOCATION_ORIGIN, payload, controls)

    def appsearch_put(self, doc: AppSearchDoc) -> AppSearchDoc:
        """Index a document; a repeated (app, doc_id) replaces the earlier one."""
        return self.appsearch_repo.create(doc)

    def appsearch_query(
        self, term: str, sandbox_caller: bool = True, controls: ControlState | None = None
    ) -> list[AppSearchDoc]:
        """
        Search the index.

        :param term: Case-sensitive whole-token term
        :param sandbox_caller: True when a sandbox feature asks (opted-out docs are hidden)
        :param controls: Controls of the device; personalize off hides everything from the sandbox
        :return: Matching documents in index order
        """
        if sandbox_caller and controls is not None and not controls.personalize_using_app_data:
            return []
        hits = self.appsearch_repo.search(term)
        if sandbox_caller:
            hits = [doc for doc in hits if doc.share_with_pcc]
        return hits
