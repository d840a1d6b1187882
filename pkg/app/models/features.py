"""Value types produced by the in-sandbox features."""

import enum

from pydantic import BaseModel, ConfigDict, Field

from app.core.validators import PackageId


class ReplyCandidate(BaseModel):
    text: str
    source_locus: str
    source_app: PackageId
    created_at: int
    record_id: str | None = None  # derived record holding this suggestion

    model_config = ConfigDict(frozen=True)


class KeystrokeFilterState(BaseModel):
    """Per-surface filter state. Once frozen, never reverts."""

    keystrokes_seen: int = 0
    typed: str = ""
    frozen: bool = False
    freeze_threshold: int = Field(default=3, ge=0)
    frozen_candidates: tuple[ReplyCandidate, ...] | None = None

    model_config = ConfigDict(frozen=True)


class SurfaceKind(str, enum.Enum):
    SYSTEM_OVERLAY = "SystemOverlay"
    LOCK_SCREEN = "LockScreen"
    DELEGATED = "Delegated"


class CaptionOverlay(BaseModel):
    """Live Caption transcript rendered on a system surface only."""

    lines: list[str] = Field(default_factory=list)
    surface: SurfaceKind = SurfaceKind.SYSTEM_OVERLAY

    model_config = ConfigDict(frozen=True)


class DimOutcome(str, enum.Enum):
    POSTPONE = "Postpone"
    DIM = "Dim"


class DimDecision(BaseModel):
    outcome: DimOutcome
    at: int

    model_config = ConfigDict(frozen=True)


class SongMatch(BaseModel):
    """Now Playing result shown on the lock screen."""

    song_id: str
    title: str
    surface: SurfaceKind = SurfaceKind.LOCK_SCREEN

    model_config = ConfigDict(frozen=True)
