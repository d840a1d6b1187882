from .analytics import FaReport, FaTask
from .audit import AuditEvent, AuditKind, Decision, DenyReason
from .data import DataCategory, DataClass, DataDescriptor, DataOrigin, DataSource
from .egress import Channel, DownloadEntry, DownloadManifest, EgressPolicy, EgressRequest, PopulationHistogram
from .features import CaptionOverlay, DimDecision, DimOutcome, KeystrokeFilterState, ReplyCandidate, SongMatch
from .ipc import IpcKind, IpcRequest, IsolatedProcessSpec
from .package import AssociationRule, CddViolation, PackageManifest, Permission, PermissionKind, Role
from .record import ControlState, EphemeralRecord
from .report import AssertionOutcome, DeviceSummary, RunReport
from .sources import (
    AppSearchDoc,
    AudioFrame,
    AudioSource,
    CameraFrame,
    CapturePolicy,
    ContentCaptureEvent,
    DropReason,
    IngestResult,
    LocationFix,
    NotificationEvent,
)

__all__ = [
    "AppSearchDoc",
    "AssertionOutcome",
    "AssociationRule",
    "AudioFrame",
    "AudioSource",
    "AuditEvent",
    "AuditKind",
    "CameraFrame",
    "CaptionOverlay",
    "CapturePolicy",
    "CddViolation",
    "Channel",
    "ContentCaptureEvent",
    "ControlState",
    "DataCategory",
    "DataClass",
    "DataDescriptor",
    "DataOrigin",
    "DataSource",
    "Decision",
    "DenyReason",
    "DeviceSummary",
    "DimDecision",
    "DimOutcome",
    "DownloadEntry",
    "DownloadManifest",
    "DropReason",
    "EgressPolicy",
    "EgressRequest",
    "EphemeralRecord",
    "FaReport",
    "FaTask",
    "IngestResult",
    "IpcKind",
    "IpcRequest",
    "IsolatedProcessSpec",
    "KeystrokeFilterState",
    "LocationFix",
    "NotificationEvent",
    "PackageManifest",
    "Permission",
    "PermissionKind",
    "PopulationHistogram",
    "ReplyCandidate",
    "Role",
    "RunReport",
    "SongMatch",
]
