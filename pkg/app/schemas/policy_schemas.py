"""Pydantic schemas for policy documents and the verify API."""

from pydantic import BaseModel, ConfigDict, Field

from app.core.validators import PackageId
from app.models.egress import EgressPolicy


class ManifestDocument(BaseModel):
    """On-disk JSON manifest. Absent fields default to empty/false."""

    package: PackageId
    permissions: list[str] = Field(default_factory=list)
    roles: list[str] = Field(default_factory=list)
    in_pcc: bool = False
    trusted_signature: bool = False
    egress_via: list[PackageId] = Field(default_factory=list)

    model_config = ConfigDict(extra="forbid")


class PolicyDocument(EgressPolicy):
    """On-disk JSON egress policy."""

    model_config = ConfigDict(frozen=True, extra="forbid")


class VerifyRequest(BaseModel):
    """Schema for the verify endpoint."""

    manifest: dict = Field(description="Manifest JSON document")
    association_config: str = Field(description="allow-association config text")


class ViolationResponse(BaseModel):
    rule_id: str
    package: str
    detail: str


class VerifyResponse(BaseModel):
    violations: list[ViolationResponse]
    advisories: list[ViolationResponse]
    clean: bool
