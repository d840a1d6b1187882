"""Pydantic schemas for the scenario-run and audit-query endpoints."""

from pydantic import BaseModel, Field


class ScenarioRunRequest(BaseModel):
    """Schema for running a scenario document."""

    scenario: dict = Field(description="Scenario JSON document")
    seed: int | None = Field(default=None, ge=0, le=2**64 - 1, description="Overrides the scenario seed")


class AuditQueryRequest(BaseModel):
    """Schema for filtering an audit log."""

    audit_log: str = Field(description="Audit log as JSON Lines, e.g. a report's audit_log")
    filters: dict[str, str] = Field(default_factory=dict, description="Field name -> rendered value")


class AuditQueryResponse(BaseModel):
    events: list[dict]
    count: int = Field(ge=0)
