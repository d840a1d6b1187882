"""
Dependency injection for the HTTP surface.

The endpoints share the CLI's services; these factories give tests a seam to
override them with `app.dependency_overrides`.
"""

import json
from pathlib import Path

import structlog

from app.core.config import settings
from app.models.report import RunReport
from app.services.fleet.scenario_loader import parse_scenario
from app.services.fleet.simulator import run_scenario
from app.services.policy.cdd_verifier import CddVerifier

logger = structlog.get_logger(__name__)


class ScenarioRunner:
    """Runs scenario documents posted over HTTP against the shipped data directory."""

    def __init__(self, base_dir: Path | None = None, policies_dir: Path | None = None):
        self.base_dir = base_dir or settings.data_dir
        self.policies_dir = policies_dir or self.base_dir / "policies"

    def run_document(self, document: dict, seed: int | None = None) -> RunReport:
        """
        :param document: Scenario JSON document
        :param seed: Optional seed override
        :return: Run report
        :raises ScenarioValidationException: If the document is invalid
        """
        loaded = parse_scenario(json.dumps(document), base_dir=self.base_dir, policies_dir=self.policies_dir)
        report = run_scenario(loaded, seed)
        logger.info("scenario_run_via_api", scenario=report.scenario, passed=report.passed)
        return report


def get_scenario_runner() -> ScenarioRunner:
    """
    Get scenario runner instance.

    :return: ScenarioRunner over settings.data_dir
    """
    return ScenarioRunner()


def get_cdd_verifier() -> CddVerifier:
    """
    Get CDD verifier instance.

    :return: CddVerifier with the default partner sets
    """
    return CddVerifier()
