"""Federated analytics tasks and their outcomes."""

from pydantic import BaseModel, ConfigDict, Field

from app.core.constants import ASI_PACKAGE
from app.core.validators import PackageId
from app.models.data import DataSource


class FaTask(BaseModel):
    """
    Count how many devices used each bucket app, via secure aggregation.

    The histogram dimension is the number of buckets.
    """

    task_id: str = Field(min_length=1)
    policy_id: str = Field(min_length=1)
    at_ms: int = Field(default=0, ge=0)
    source: DataSource = DataSource.APP_LAUNCHES
    buckets: list[PackageId] = Field(min_length=1)
    popularity_threshold: int = Field(default=1, ge=0)
    window_ms: int | None = Field(default=None, gt=0)  # only records newer than now - window_ms
    requester: PackageId = ASI_PACKAGE

    model_config = ConfigDict(frozen=True)


class FaReport(BaseModel):
    """What the server side learns: the aggregate, never a per-device vector."""

    task_id: str
    aggregate: list[int]
    buckets: list[str]
    popular_buckets: list[str]
    participants: list[str]
    excluded: dict[str, str] = Field(default_factory=dict)
    survivors: list[str] = Field(default_factory=list)
    survivors_per_round: dict[str, int] = Field(default_factory=dict)
    transcript_digest: str | None = None
    uplink_bytes: int = 0
    aborted: str | None = None

    model_config = ConfigDict(frozen=True)
