"""Boundary-crossing requests and the policies that govern them."""

import enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.constants import DEFAULT_K_ANONYMITY
from app.core.validators import PackageId, Sha256Hex
from app.models.data import DataCategory, DataDescriptor


class Channel(str, enum.Enum):
    FEDERATED_COMPUTE = "FederatedCompute"
    PIR_QUERY = "PirQuery"
    DOWNLOAD_ONLY = "DownloadOnly"
    FRAMEWORK_SURFACE = "FrameworkSurface"

    @property
    def is_network(self) -> bool:
        return self is not Channel.FRAMEWORK_SURFACE


NETWORK_CHANNELS = frozenset(c for c in Channel if c.is_network)


class EgressRequest(BaseModel):
    """A sandbox package asking to move data across the boundary."""

    requester: PackageId
    descriptor: DataDescriptor
    channel: Channel
    payload: bytes = b""
    policy_id: str
    feature: str | None = None
    user_action: bool = False
    destination: str | None = None  # receiving app of a FrameworkSurface release

    model_config = ConfigDict(frozen=True)


class EgressPolicy(BaseModel):
    """Declarative egress policy. Raw never leaves on a network channel, whatever the document says."""

    policy_id: str = Field(min_length=1)
    allowed_categories: frozenset[DataCategory] = frozenset()
    allowed_channels: frozenset[Channel] = frozenset()
    k: int = Field(default=DEFAULT_K_ANONYMITY, ge=1)
    notes: str = ""

    model_config = ConfigDict(frozen=True)

    def permits_category(self, category: DataCategory, channel: Channel) -> bool:
        if category == DataCategory.RAW and channel.is_network:
            return False
        return category in self.allowed_categories


class DownloadEntry(BaseModel):
    uri: str = Field(min_length=1)
    sha256: Sha256Hex

    model_config = ConfigDict(frozen=True)


class DownloadManifest(BaseModel):
    """Exact (uri, digest) pairs the download-only transport may fetch."""

    entries: list[DownloadEntry] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)

    def digest_for(self, uri: str) -> str | None:
        for entry in self.entries:
            if entry.uri == uri:
                return entry.sha256
        return None


class PopulationHistogram(BaseModel):
    """value -> number of devices holding it, computed from fleet ground truth."""

    counts: dict[bytes, int] = Field(default_factory=dict)
    device_count: int = Field(default=0, ge=0)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_counts(self) -> "PopulationHistogram":
        for value, count in self.counts.items():
            if not 0 <= count <= self.device_count:
                raise ValueError(f"count {count} for {value!r} outside [0, {self.device_count}]")
        return self

    def count(self, value: bytes) -> int:
        return self.counts.get(value, 0)

    @classmethod
    def from_observations(cls, observations: dict[str, set[bytes]]) -> "PopulationHistogram":
        """
        :param observations: device -> distinct values seen on that device
        """
        counts: dict[bytes, int] = {}
        for values in observations.values():
            for value in values:
                counts[value] = counts.get(value, 0) + 1
        return cls(counts=counts, device_count=len(observations))
