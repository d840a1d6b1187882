"""Adjudication decisions and the audit events that record them."""

import enum

from pydantic import BaseModel, ConfigDict

from app.core.constants import AUDIT_FIELD_ORDER


class DenyReason(str, enum.Enum):
    # IPC broker
    UNKNOWN_PACKAGE = "UnknownPackage"
    NO_ASSOCIATION = "NoAssociation"
    RATE_LIMITED = "RateLimited"
    # Gateway
    UNKNOWN_POLICY = "UnknownPolicy"
    NOT_SANDBOX_PACKAGE = "NotSandboxPackage"
    NO_INTERNET = "NoInternet"
    CATEGORY = "Category"
    CHANNEL = "Channel"
    K_ANONYMITY = "KAnonymity"
    # Download-only transport
    DIGEST_MISMATCH = "DigestMismatch"
    NOT_ALLOWLISTED = "NotAllowlisted"
    UNAVAILABLE = "Unavailable"


class Decision(BaseModel):
    """Allow, or Deny with a reason."""

    allowed: bool
    reason: DenyReason | None = None

    model_config = ConfigDict(frozen=True)

    @classmethod
    def allow(cls) -> "Decision":
        return cls(allowed=True)

    @classmethod
    def deny(cls, reason: DenyReason) -> "Decision":
        return cls(allowed=False, reason=reason)

    @property
    def label(self) -> str:
        return "Allow" if self.allowed else "Deny"

    def __str__(self) -> str:
        return self.label if self.allowed else f"Deny({self.reason.value if self.reason else '?'})"


class AuditKind(str, enum.Enum):
    IPC = "ipc"
    EGRESS = "egress"
    DOWNLOAD = "download"
    SURFACE = "surface"


class AuditEvent(BaseModel):
    """One adjudicated boundary crossing. bytes_out is 0 for every Deny."""

    t: int
    kind: AuditKind
    src: str
    dst: str | None = None
    decision: str
    reason: str | None = None
    channel: str | None = None
    category: str | None = None
    bytes_out: int = 0
    bytes_in: int = 0
    feature: str | None = None
    user_action: bool = False
    device: str | None = None

    model_config = ConfigDict(frozen=True)

    @property
    def allowed(self) -> bool:
        return self.decision == "Allow"

    def to_ordered_dict(self) -> dict:
        """Field values in the stable JSON Lines order."""
        dumped = self.model_dump(mode="json")
        return {name: dumped[name] for name in AUDIT_FIELD_ORDER}
