"""Run report: everything a scenario run produced, serialized with stable key order."""

import json

from pydantic import BaseModel, ConfigDict, Field

from app.models.analytics import FaReport
from app.models.package import CddViolation


class AssertionOutcome(BaseModel):
    name: str
    passed: bool
    detail: str = ""

    model_config = ConfigDict(frozen=True)


class DeviceSummary(BaseModel):
    name: str
    live_records: int
    ingest_drops: dict[str, int] = Field(default_factory=dict)
    candidates: list[str] = Field(default_factory=list)
    observations: list[int] = Field(default_factory=list)
    released: list[str] = Field(default_factory=list)
    captions: list[list[str]] = Field(default_factory=list)
    dim_decisions: list[str] = Field(default_factory=list)
    songs: list[str] = Field(default_factory=list)
    appsearch_hits: list[int] = Field(default_factory=list)


class RunReport(BaseModel):
    scenario: str
    seed: int
    tool_version: str
    config_hash: str
    passed: bool
    assertions: list[AssertionOutcome]
    audit_digest: str
    audit_events: int
    audit_log: str  # JSON Lines
    deny_counts: dict[str, int]
    fa_aggregates: dict[str, FaReport]
    pir_transcripts: list[dict]
    violations: list[CddViolation]
    advisories: list[CddViolation]
    devices: list[DeviceSummary]
    bytes_out: int
    bytes_in: int

    def to_json(self) -> str:
        """Canonical rendering: sorted keys, two-space indent, trailing newline."""
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
