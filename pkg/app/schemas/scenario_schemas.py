"""
Pydantic schemas for scenario documents.

The JSON-Schema printed by `pcc-sim schema` is generated from `Scenario`.
"""

from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field

from app.core.validators import PackageId
from app.models.analytics import FaTask
from app.models.data import DataCategory, DataSource
from app.models.egress import Channel
from app.models.ipc import IpcKind
from app.models.record import ControlState
from app.models.sources import AudioSource, CapturePolicy
from app.schemas.policy_schemas import PolicyDocument

MAX_SEED = 2**64 - 1


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ControlsSpec(_Strict):
    personalize_using_app_data: bool = True
    mic_enabled: bool = True
    camera_enabled: bool = True
    revoked_runtime_permissions: list[str] = Field(default_factory=list)
    screen_capture_policy_disabled: bool = False

    def to_state(self) -> ControlState:
        return ControlState(
            personalize_using_app_data=self.personalize_using_app_data,
            mic_enabled=self.mic_enabled,
            camera_enabled=self.camera_enabled,
            revoked_runtime_permissions=frozenset(self.revoked_runtime_permissions),
            screen_capture_policy_disabled=self.screen_capture_policy_disabled,
        )


class ControlsPatch(_Strict):
    """Partial control update; absent fields keep their value."""

    personalize_using_app_data: bool | None = None
    mic_enabled: bool | None = None
    camera_enabled: bool | None = None
    revoked_runtime_permissions: list[str] | None = None
    screen_capture_policy_disabled: bool | None = None

    def apply(self, state: ControlState) -> ControlState:
        update = self.model_dump(exclude_none=True)
        if "revoked_runtime_permissions" in update:
            update["revoked_runtime_permissions"] = frozenset(update["revoked_runtime_permissions"])
        return state.model_copy(update=update)


class FeatureSettings(_Strict):
    smart_reply_allowlist: list[PackageId] = Field(default_factory=list)
    keystroke_freeze_threshold: int | None = Field(default=None, ge=0)
    live_caption_enabled: bool = False
    live_caption_model_uri: str | None = None
    screen_attention_opt_in: bool = False


# ---------------------------------------------------------------------------
# Device events
# ---------------------------------------------------------------------------


class _Event(_Strict):
    at_ms: int = Field(ge=0)


class ContentCaptureSpec(_Event):
    type: Literal["content_capture"]
    app: PackageId
    view_text: str = ""
    structured_fields: dict[str, str] = Field(default_factory=dict)
    locus_id: str = Field(min_length=1)
    flag_secure: bool = False
    app_opt_out: bool = False
    ttl_ms: int | None = Field(default=None, gt=0)


class ShareDataSpec(_Event):
    type: Literal["share_data"]
    app: PackageId
    payload: str = ""
    locus_id: str = Field(min_length=1)


class AppSearchPutSpec(_Event):
    type: Literal["appsearch_put"]
    app: PackageId
    doc_id: str = Field(min_length=1)
    body: dict[str, str] = Field(default_factory=dict)
    share_with_pcc: bool = True


class AppSearchQuerySpec(_Event):
    type: Literal["appsearch_query"]
    term: str
    sandbox_caller: bool = True


class AudioSpec(_Event):
    type: Literal["audio"]
    source: AudioSource = AudioSource.FRAMEWORK_AUDIO
    label: str | None = None
    capture_policy: CapturePolicy = CapturePolicy.ALLOW_ALL


class CameraSpec(_Event):
    type: Literal["camera"]
    face_present: bool


class LocationSpec(_Event):
    type: Literal["location"]
    latitude: float
    longitude: float


class NotificationSpec(_Event):
    type: Literal["notification"]
    app: PackageId
    title: str = ""
    text: str = ""


class ScreenshotSpec(_Event):
    type: Literal["screenshot"]
    app: PackageId
    flag_secure: bool = False


class ContactSpec(_Event):
    type: Literal["contact"]
    display_name: str
    phone: str = ""


class AppLaunchSpec(_Event):
    type: Literal["app_launch"]
    app: PackageId


class ShortcutSpec(_Event):
    type: Literal["shortcut"]
    app: PackageId
    shortcut_id: str = Field(min_length=1)
    label: str = ""


class IpcSpec(_Event):
    type: Literal["ipc"]
    src: PackageId
    dst: PackageId
    kind: IpcKind = IpcKind.BIND_SERVICE
    category: DataCategory | None = None
    source: DataSource | None = None


class EgressSpec(_Event):
    type: Literal["egress"]
    requester: PackageId
    category: DataCategory
    source: DataSource
    channel: Channel
    payload: str = ""
    policy_id: str = Field(min_length=1)
    feature: str | None = None


class SmartReplySpec(_Event):
    type: Literal["smart_reply"]
    target_app: PackageId


class KeystrokeSpec(_Event):
    type: Literal["keystroke"]
    key: str = Field(min_length=1)


class TapSpec(_Event):
    type: Literal["tap"]
    index: int = Field(ge=0)


class ObserveSpec(_Event):
    type: Literal["observe"]


class CaptionFrameSpec(_Strict):
    label: str | None = None
    source: AudioSource = AudioSource.FRAMEWORK_AUDIO
    capture_policy: CapturePolicy = CapturePolicy.ALLOW_ALL


class LiveCaptionSpec(_Event):
    type: Literal["live_caption"]
    frames: list[CaptionFrameSpec] = Field(default_factory=list)


class AttentionFrameSpec(_Strict):
    face_present: bool
    timestamp: int = Field(ge=0)


class ScreenAttentionSpec(_Event):
    type: Literal["screen_attention"]
    frames: list[AttentionFrameSpec] = Field(default_factory=list)


class NowPlayingSpec(_Event):
    type: Literal["now_playing"]
    label: str | None = None
    capture_policy: CapturePolicy = CapturePolicy.ALLOW_ALL


class DeleteLocusSpec(_Event):
    type: Literal["delete_locus"]
    locus_id: str = Field(min_length=1)


class ClearDataSpec(_Event):
    type: Literal["clear_data"]
    start: int | None = Field(default=None, ge=0)
    end: int | None = Field(default=None, ge=0)


class SetControlsSpec(_Event):
    type: Literal["set_controls"]
    controls: ControlsPatch


class FetchModelSpec(_Event):
    type: Literal["fetch_model"]
    uri: str = Field(min_length=1)
    requester: PackageId | None = None


DeviceEvent = Annotated[
    ContentCaptureSpec
    | ShareDataSpec
    | AppSearchPutSpec
    | AppSearchQuerySpec
    | AudioSpec
    | CameraSpec
    | LocationSpec
    | NotificationSpec
    | ScreenshotSpec
    | ContactSpec
    | AppLaunchSpec
    | ShortcutSpec
    | IpcSpec
    | EgressSpec
    | SmartReplySpec
    | KeystrokeSpec
    | TapSpec
    | ObserveSpec
    | LiveCaptionSpec
    | ScreenAttentionSpec
    | NowPlayingSpec
    | DeleteLocusSpec
    | ClearDataSpec
    | SetControlsSpec
    | FetchModelSpec,
    Field(discriminator="type"),
]


# ---------------------------------------------------------------------------
# Fleet
# ---------------------------------------------------------------------------


class DeviceDefaults(_Strict):
    packages: list[str] = Field(default_factory=lambda: ["manifests/asi_manifest.json", "manifests/pcs_manifest.json"])
    association_config: str = "associations/default_associations.xml"
    controls: ControlsSpec = Field(default_factory=ControlsSpec)
    features: FeatureSettings = Field(default_factory=FeatureSettings)


class DeviceSpec(_Strict):
    name: str | None = Field(default=None, min_length=1)
    packages: list[str] | None = None
    controls: ControlsSpec | None = None
    features: FeatureSettings | None = None
    events: list[DeviceEvent] = Field(default_factory=list)


class ModelSpec(_Strict):
    """A model hosted by the simulated server."""

    uri: str = Field(min_length=1)
    content: str
    allowlisted: bool = True
    tamper_bit: int | None = Field(default=None, ge=0)
    transient_failures: int = Field(default=0, ge=0)


class PirSpec(_Strict):
    records: dict[str, str] = Field(min_length=1)
    record_size: int = Field(default=64, ge=1)
    limb_size: int = Field(default=2, ge=1, le=8)
    key_bits: int | None = Field(default=None, ge=64)


class ServerSpec(_Strict):
    models: list[ModelSpec] = Field(default_factory=list)
    fa_tasks: list[FaTask] = Field(default_factory=list)
    pir: PirSpec | None = None
    policies: list[PolicyDocument] = Field(default_factory=list)


class DropoutSpec(_Strict):
    device: str = Field(min_length=1)
    task_id: str = Field(min_length=1)
    round: Literal["Advertise", "ShareKeys", "MaskedInput", "Unmask"]
    action: Literal["drop"] = "drop"


AssertionName = Literal[
    "no_raw_egress",
    "byte_accounting",
    "screen_attention_silent",
    "delegated_counts_only",
    "no_flag_secure_candidates",
    "fa_matches_plaintext",
    "deny_count",
    "fa_aggregate",
    "cdd_clean",
    "caption_lines",
    "dim_outcomes",
    "now_playing_matches",
]


class AssertionSpec(_Strict):
    name: AssertionName
    params: dict = Field(default_factory=dict)


class Scenario(_Strict):
    """A complete, self-describing simulation run."""

    name: str = "scenario"
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    defaults: DeviceDefaults = Field(default_factory=DeviceDefaults)
    devices: list[DeviceSpec] = Field(min_length=1)
    server: ServerSpec = Field(default_factory=ServerSpec)
    dropout_schedule: list[DropoutSpec] = Field(default_factory=list)
    assertions: list[AssertionSpec] = Field(default_factory=list)

    def device_names(self) -> list[str]:
        return [device.name or f"device-{index:02d}" for index, device in enumerate(self.devices, start=1)]
