"""Ephemeral records and the user/admin control state gating their creation."""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.data import LOCUS_SOURCES, DataCategory, DataDescriptor


class EphemeralRecord(BaseModel):
    """TTL-bounded datum held in sandbox memory."""

    id: str
    descriptor: DataDescriptor
    payload: bytes
    locus_id: str | None = None
    created_at: int = Field(ge=0)
    ttl: int = Field(gt=0)
    parent_ids: frozenset[str] = frozenset()

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_locus(self) -> "EphemeralRecord":
        if self.descriptor.category == DataCategory.RAW:
            needs_locus = self.descriptor.source in LOCUS_SOURCES
            if needs_locus != (self.locus_id is not None):
                raise ValueError(f"locus id presence does not match source {self.descriptor.source.value}")
            if self.parent_ids:
                raise ValueError("raw records have no parents")
        elif self.descriptor.category == DataCategory.DERIVED and not self.parent_ids:
            raise ValueError("derived records must name their inputs")
        return self

    @property
    def expires_at(self) -> int:
        return self.created_at + self.ttl

    def is_live(self, now: int) -> bool:
        """Readable iff now <= created_at + ttl (boundary inclusive)."""
        return now <= self.expires_at


class ControlState(BaseModel):
    """User, admin and permission controls that gate data sources."""

    personalize_using_app_data: bool = True
    mic_enabled: bool = True
    camera_enabled: bool = True
    revoked_runtime_permissions: frozenset[str] = frozenset()
    screen_capture_policy_disabled: bool = False

    model_config = ConfigDict(frozen=True)
