"""
Common response schemas used across multiple endpoints.
"""

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    """
    Generic health check response.

    Used for health/status check endpoints.
    """

    status: str = Field(description="Health status message")
    version: str = Field(description="Simulator version")
    config_hash: str = Field(description="Hash of the settings that influence results")
