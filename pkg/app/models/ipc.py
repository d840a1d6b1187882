import enum

from pydantic import BaseModel, ConfigDict, Field

from app.core.validators import PackageId
from app.models.data import DataDescriptor


class IpcKind(str, enum.Enum):
    BIND_SERVICE = "BindService"
    CONTENT_PROVIDER = "ContentProvider"
    BROADCAST_INTENT = "BroadcastIntent"
    FRAMEWORK_API = "FrameworkApi"  # proxied by the platform, rate limited


class IpcRequest(BaseModel):
    """An attempted inter-process call."""

    src: PackageId
    dst: PackageId
    kind: IpcKind
    payload_descriptor: DataDescriptor | None = None

    model_config = ConfigDict(frozen=True)


class IsolatedProcessSpec(BaseModel):
    """Request for an isolated (optionally ephemeral) process."""

    owner: PackageId
    ephemeral: bool = False
    max_lifetime: int = Field(default=0, ge=0)

    model_config = ConfigDict(frozen=True)
