"""One simulated device: its sandbox services, features and event handlers."""

import random
from collections import Counter
from collections.abc import Callable

import structlog

from app.core.constants import ASI_PACKAGE
from app.core.exceptions import DomainException, ScenarioValidationException
from app.implementations.paillier_scheme import PaillierScheme
from app.models.audit import Decision
from app.models.data import DataDescriptor
from app.models.egress import DownloadManifest, EgressPolicy, EgressRequest, PopulationHistogram
from app.models.ipc import IpcRequest
from app.models.package import AssociationRule, PackageManifest
from app.models.record import ControlState
from app.models.sources import (
    AppLaunchEvent,
    AppSearchDoc,
    AudioFrame,
    AudioSource,
    CameraFrame,
    ContactEntry,
    ContentCaptureEvent,
    IngestResult,
    LocationFix,
    NotificationEvent,
    ScreenshotEvent,
    ShortcutEvent,
)
from app.repositories.audit_repository import IAuditRepository
from app.repositories.package_repository import PackageRepository
from app.schemas import scenario_schemas as spec
from app.services.features.delegated_ui import DelegatedSurface, DelegatedUiService
from app.services.features.feature_host import FeatureHost
from app.services.features.live_caption import LiveCaptionService
from app.services.features.now_playing import NowPlayingService
from app.services.features.screen_attention import ScreenAttentionService
from app.services.features.smart_reply import SmartReplyService
from app.services.gateway.download_transport import DownloadOnlyTransport, ModelServer
from app.services.gateway.gateway_service import GatewayService
from app.services.pir.client import PirClient
from app.services.pir.database import PirDatabase
from app.services.pir.server import PirServer
from app.services.sandbox.clock import SimClock
from app.services.sandbox.ephemeral_store import EphemeralStoreService
from app.services.sandbox.ipc_broker import IpcBroker
from app.services.sandbox.process_manager import ProcessManager
from app.services.sources.ingestion_service import IngestionService

logger = structlog.get_logger(__name__)


class SimulatedDevice:
    """
    Per-device sandbox: package registry, store, broker, gateway, transport and
    the reference features, all driven by the fleet clock.
    """

    def __init__(
        self,
        index: int,
        name: str,
        manifests: list[PackageManifest],
        rules: list[AssociationRule],
        controls: ControlState,
        features: spec.FeatureSettings,
        clock: SimClock,
        audit_repo: IAuditRepository,
        policies: dict[str, EgressPolicy],
        histogram: PopulationHistogram,
        download_manifest: DownloadManifest,
        model_server: ModelServer,
        pir_server: PirServer | None = None,
        pir_rng: random.Random | None = None,
    ):
        self.index = index
        self.name = name
        self.clock = clock
        self.controls = controls
        self.features = features
        self.rules = rules

        self.packages = PackageRepository()
        for position, manifest in enumerate(manifests):
            try:
                self.packages.register(manifest)
            except DomainException as e:
                raise ScenarioValidationException(f"/devices/{index - 1}/packages/{position}", e.message) from e

        self.store = EphemeralStoreService(clock)
        self.ingestion = IngestionService(self.store)
        self.processes = ProcessManager(self.packages, clock)
        self.broker = IpcBroker(self.packages, rules, audit_repo, clock, device=name)
        self.gateway = GatewayService(self.packages, policies, audit_repo, clock, histogram, device=name)
        self.transport = DownloadOnlyTransport(download_manifest, model_server, audit_repo, clock, device=name)

        self.smart_reply = SmartReplyService(
            self.store, features.smart_reply_allowlist, host=FeatureHost(self.processes, ASI_PACKAGE)
        )
        self.delegated = DelegatedUiService(
            self.gateway,
            FeatureHost(self.processes, ASI_PACKAGE),
            freeze_threshold=features.keystroke_freeze_threshold,
        )
        self.live_caption = LiveCaptionService(
            self.ingestion,
            self.transport,
            host=FeatureHost(self.processes, ASI_PACKAGE),
            model_uri=features.live_caption_model_uri,
        )
        self.screen_attention = ScreenAttentionService(self.ingestion, host=FeatureHost(self.processes, ASI_PACKAGE))
        self.pir_server = pir_server
        self.pir_rng = pir_rng
        self._now_playing: NowPlayingService | None = None
        self._caption_started = False

        self.surface: DelegatedSurface | None = None
        self.drops: Counter[str] = Counter()
        self.candidates: list[str] = []
        self.candidate_loci: list[str] = []
        self.flag_secure_loci: set[str] = set()
        self.released: list[str] = []
        self.captions: list[list[str]] = []
        self.dim_decisions: list[str] = []
        self.songs: list[str] = []
        self.appsearch_hits: list[int] = []
        self.egress_bytes = 0
        self.download_bytes = 0

        self._handlers: dict[str, Callable] = {
            "content_capture": self._on_content_capture,
            "share_data": self._on_share_data,
            "appsearch_put": self._on_appsearch_put,
            "appsearch_query": self._on_appsearch_query,
            "audio": self._on_audio,
            "camera": self._on_camera,
            "location": self._on_location,
            "notification": self._on_notification,
            "screenshot": self._on_screenshot,
            "contact": self._on_contact,
            "app_launch": self._on_app_launch,
            "shortcut": self._on_shortcut,
            "ipc": self._on_ipc,
            "egress": self._on_egress,
            "smart_reply": self._on_smart_reply,
            "keystroke": self._on_keystroke,
            "tap": self._on_tap,
            "observe": self._on_observe,
            "live_caption": self._on_live_caption,
            "screen_attention": self._on_screen_attention,
            "now_playing": self._on_now_playing,
            "delete_locus": self._on_delete_locus,
            "clear_data": self._on_clear_data,
            "set_controls": self._on_set_controls,
            "fetch_model": self._on_fetch_model,
        }

    def handle(self, event) -> None:
        """Apply one scenario event at the current clock time."""
        self.store.purge_expired()
        self._handlers[event.type](event)

    @property
    def now_playing(self) -> NowPlayingService | None:
        if self._now_playing is None and self.pir_server is not None:
            database = self.pir_server.database
            client = PirClient(
                self.pir_server.scheme,
                self.pir_rng or random.Random(self.index),
                record_size=database.record_size,
                limb_size=database.limb_size,
            )
            self._now_playing = NowPlayingService(
                self.ingestion,
                self.gateway,
                self.pir_server,
                client,
                host=FeatureHost(self.processes, ASI_PACKAGE),
            )
        return self._now_playing

    def _tally(self, result: IngestResult) -> IngestResult:
        if result.dropped is not None:
            self.drops[result.dropped.value] += 1
        return result

    # ------------------------------------------------------------------
    # Data sources
    # ------------------------------------------------------------------

    def _on_content_capture(self, event: spec.ContentCaptureSpec) -> None:
        if event.flag_secure:
            self.flag_secure_loci.add(event.locus_id)
        capture = ContentCaptureEvent(
            app=event.app,
            view_text=event.view_text,
            structured_fields=event.structured_fields,
            locus_id=event.locus_id,
            flag_secure=event.flag_secure,
            app_opt_out=event.app_opt_out,
        )
        self._tally(self.ingestion.ingest_content_capture(capture, self.controls, ttl=event.ttl_ms))

    def _on_share_data(self, event: spec.ShareDataSpec) -> None:
        result = self.ingestion.ingest_share_data(
            event.app, event.payload.encode("utf-8"), event.locus_id, self.controls
        )
        self._tally(result)

    def _on_appsearch_put(self, event: spec.AppSearchPutSpec) -> None:
        doc = AppSearchDoc(app=event.app, doc_id=event.doc_id, body=event.body, share_with_pcc=event.share_with_pcc)
        self.ingestion.appsearch_put(doc)

    def _on_appsearch_query(self, event: spec.AppSearchQuerySpec) -> None:
        hits = self.ingestion.appsearch_query(event.term, event.sandbox_caller, self.controls)
        self.appsearch_hits.append(len(hits))

    def _on_audio(self, event: spec.AudioSpec) -> None:
        frame = AudioFrame(source=event.source, label=event.label, capture_policy=event.capture_policy)
        self._tally(self.ingestion.capture_audio(frame, self.controls))

    def _on_camera(self, event: spec.CameraSpec) -> None:
        frame = CameraFrame(face_present=event.face_present, timestamp=self.clock.now)
        self._tally(self.ingestion.capture_camera(frame, self.controls))

    def _on_location(self, event: spec.LocationSpec) -> None:
        fix = LocationFix(latitude=event.latitude, longitude=event.longitude)
        self._tally(self.ingestion.capture_location(fix, self.controls))

    def _on_notification(self, event: spec.NotificationSpec) -> None:
        notification = NotificationEvent(app=event.app, title=event.title, text=event.text)
        self._tally(self.ingestion.ingest_notification(notification, self.controls))

    def _on_screenshot(self, event: spec.ScreenshotSpec) -> None:
        screenshot = ScreenshotEvent(app=event.app, flag_secure=event.flag_secure)
        self._tally(self.ingestion.ingest_screenshot(screenshot, self.controls))

    def _on_contact(self, event: spec.ContactSpec) -> None:
        entry = ContactEntry(display_name=event.display_name, phone=event.phone)
        self._tally(self.ingestion.ingest_contact(entry, self.controls))

    def _on_app_launch(self, event: spec.AppLaunchSpec) -> None:
        self._tally(self.ingestion.ingest_app_launch(AppLaunchEvent(app=event.app), self.controls))

    def _on_shortcut(self, event: spec.ShortcutSpec) -> None:
        shortcut = ShortcutEvent(app=event.app, shortcut_id=event.shortcut_id, label=event.label)
        self._tally(self.ingestion.ingest_shortcut(shortcut, self.controls))

    # ------------------------------------------------------------------
    # Boundary crossings
    # ------------------------------------------------------------------

    def _on_ipc(self, event: spec.IpcSpec) -> None:
        descriptor = None
        if event.category is not None and event.source is not None:
            descriptor = DataDescriptor.for_source(event.category, event.source, event.src)
        self.broker.adjudicate(IpcRequest(src=event.src, dst=event.dst, kind=event.kind, payload_descriptor=descriptor))

    def _on_egress(self, event: spec.EgressSpec) -> None:
        payload = event.payload.encode("utf-8")
        request = EgressRequest(
            requester=event.requester,
            descriptor=DataDescriptor.for_source(event.category, event.source, event.requester),
            channel=event.channel,
            payload=payload,
            policy_id=event.policy_id,
            feature=event.feature,
        )
        decision: Decision = self.gateway.gate(request)
        if decision.allowed:
            self.egress_bytes += len(payload)

    def _on_fetch_model(self, event: spec.FetchModelSpec) -> None:
        result = self.transport.fetch_model(event.uri, event.requester or ASI_PACKAGE, feature="fetch_model")
        if result.blob is not None:
            self.download_bytes += len(result.blob)

    # ------------------------------------------------------------------
    # Features
    # ------------------------------------------------------------------

    def _on_smart_reply(self, event: spec.SmartReplySpec) -> None:
        candidates = self.smart_reply.suggest()
        self.candidates.extend(c.text for c in candidates)
        self.candidate_loci.extend(c.source_locus for c in candidates)
        self.surface = self.delegated.render(candidates, event.target_app)
        self.delegated.target_observe(self.surface)

    def _on_keystroke(self, event: spec.KeystrokeSpec) -> None:
        if self.surface is None:
            logger.info("keystroke_without_surface", device=self.name)
            return
        self.delegated.type_key(self.surface, event.key)
        self.delegated.target_observe(self.surface)

    def _on_tap(self, event: spec.TapSpec) -> None:
        if self.surface is None:
            return
        text = self.delegated.tap(self.surface, event.index)
        if text is not None:
            self.released.append(text)

    def _on_observe(self, event: spec.ObserveSpec) -> None:
        if self.surface is not None:
            self.delegated.target_observe(self.surface)

    def _on_live_caption(self, event: spec.LiveCaptionSpec) -> None:
        enabled = self.features.live_caption_enabled
        if enabled and not self._caption_started:
            self._caption_started = True
            fetched = self.live_caption.start()
            if fetched is not None and fetched.blob is not None:
                self.download_bytes += len(fetched.blob)
        frames = [
            AudioFrame(source=f.source, label=f.label, capture_policy=f.capture_policy) for f in event.frames
        ]
        overlay = self.live_caption.caption(frames, self.controls, enabled=enabled)
        if overlay is not None:
            self.captions.append(list(overlay.lines))

    def _on_screen_attention(self, event: spec.ScreenAttentionSpec) -> None:
        frames = [CameraFrame(face_present=f.face_present, timestamp=f.timestamp) for f in event.frames]
        decision = self.screen_attention.decide(
            self.clock.now, self.controls, self.features.screen_attention_opt_in, frames
        )
        self.dim_decisions.append(decision.outcome.value)

    def _on_now_playing(self, event: spec.NowPlayingSpec) -> None:
        service = self.now_playing
        if service is None:
            return
        frame = AudioFrame(source=AudioSource.FRAMEWORK_AUDIO, label=event.label, capture_policy=event.capture_policy)
        song = service.listen(frame, self.controls)
        if song is not None:
            self.songs.append(song.song_id)

    # ------------------------------------------------------------------
    # User controls
    # ------------------------------------------------------------------

    def _on_delete_locus(self, event: spec.DeleteLocusSpec) -> None:
        self.store.delete_by_locus(event.locus_id)

    def _on_clear_data(self, event: spec.ClearDataSpec) -> None:
        self.store.clear_data(event.start, event.end)

    def _on_set_controls(self, event: spec.SetControlsSpec) -> None:
        self.controls = event.controls.apply(self.controls)
        logger.debug("controls_changed", device=self.name)

    @property
    def pir_exchanges(self) -> list[dict]:
        if self._now_playing is None:
            return []
        return [{"device": self.name, **exchange.model_dump()} for exchange in self._now_playing.exchanges]

    @property
    def pir_bytes(self) -> int:
        return sum(exchange["query_bytes"] for exchange in self.pir_exchanges)


def build_pir_server(pir: spec.PirSpec) -> PirServer:
    """PIR server over the scenario's record set."""
    database = PirDatabase.from_mapping(
        {name: text.encode("utf-8") for name, text in pir.records.items()},
        record_size=pir.record_size,
        limb_size=pir.limb_size,
    )
    return PirServer(database, PaillierScheme(key_bits=pir.key_bits))

