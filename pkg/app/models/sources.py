"""Framework data-source events and ingestion outcomes."""

import enum

from pydantic import BaseModel, ConfigDict, Field

from app.core.constants import MEDIA_ORIGIN
from app.core.validators import PackageId


class DropReason(str, enum.Enum):
    FLAG_SECURE = "FlagSecure"
    APP_OPT_OUT = "AppOptOut"
    USER_CONTROL = "UserControl"
    ADMIN_POLICY = "AdminPolicy"
    SENSOR_TOGGLE = "SensorToggle"
    PERMISSION_REVOKED = "PermissionRevoked"
    FEATURE_DISABLED = "FeatureDisabled"


class IngestResult(BaseModel):
    """Stored record id, or the reason ingestion was dropped."""

    record_id: str | None = None
    dropped: DropReason | None = None

    model_config = ConfigDict(frozen=True)

    @property
    def stored(self) -> bool:
        return self.record_id is not None


class ContentCaptureEvent(BaseModel):
    app: PackageId
    view_text: str = ""
    structured_fields: dict[str, str] = Field(default_factory=dict)
    locus_id: str = Field(min_length=1)
    flag_secure: bool = False
    app_opt_out: bool = False

    model_config = ConfigDict(frozen=True)


class AppSearchDoc(BaseModel):
    app: PackageId
    doc_id: str = Field(min_length=1)
    body: dict[str, str] = Field(default_factory=dict)
    share_with_pcc: bool = True

    model_config = ConfigDict(frozen=True)


class AudioSource(str, enum.Enum):
    FRAMEWORK_AUDIO = "FrameworkAudio"
    MICROPHONE = "Microphone"


class CapturePolicy(str, enum.Enum):
    ALLOW_ALL = "AllowAll"
    ALLOW_CAPTURE_BY_NONE = "AllowCaptureByNone"


class AudioFrame(BaseModel):
    source: AudioSource
    samples: bytes = b""
    capture_policy: CapturePolicy = CapturePolicy.ALLOW_ALL  # ignored for Microphone
    label: str | None = None
    app: PackageId = MEDIA_ORIGIN

    model_config = ConfigDict(frozen=True)


class CameraFrame(BaseModel):
    face_present: bool
    timestamp: int = Field(ge=0)

    model_config = ConfigDict(frozen=True)


class LocationFix(BaseModel):
    latitude: float
    longitude: float
    accuracy_m: float = 10.0

    model_config = ConfigDict(frozen=True)


class NotificationEvent(BaseModel):
    app: PackageId
    title: str = ""
    text: str = ""

    model_config = ConfigDict(frozen=True)


class ScreenshotEvent(BaseModel):
    app: PackageId
    image: bytes = b""
    flag_secure: bool = False

    model_config = ConfigDict(frozen=True)


class ContactEntry(BaseModel):
    display_name: str
    phone: str = ""

    model_config = ConfigDict(frozen=True)


class AppLaunchEvent(BaseModel):
    app: PackageId

    model_config = ConfigDict(frozen=True)


class ShortcutEvent(BaseModel):
    app: PackageId
    shortcut_id: str = Field(min_length=1)
    label: str = ""

    model_config = ConfigDict(frozen=True)
