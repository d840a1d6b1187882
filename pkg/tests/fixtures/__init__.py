"""Test fixtures and factories."""

from tests.fixtures.factories import (
    MESSENGER_PACKAGE,
    ContentCaptureFactory,
    EgressPolicyFactory,
    EgressRequestFactory,
    FaTaskFactory,
    ManifestFactory,
    ReplyCandidateFactory,
    ScenarioFactory,
)

__all__ = [
    "MESSENGER_PACKAGE",
    "ContentCaptureFactory",
    "EgressPolicyFactory",
    "EgressRequestFactory",
    "FaTaskFactory",
    "ManifestFactory",
    "ReplyCandidateFactory",
    "ScenarioFactory",
]
