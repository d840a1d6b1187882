"""
Scenario API endpoints.
"""

from fastapi import APIRouter, Depends

from app.models.report import RunReport
from app.schemas.simulation_schemas import ScenarioRunRequest
from app.services.service_dependencies import ScenarioRunner, get_scenario_runner

router = APIRouter(prefix="/scenarios", tags=["scenarios"])


@router.post("/run", response_model=RunReport)
def run_scenario_document(
    request: ScenarioRunRequest,
    runner: ScenarioRunner = Depends(get_scenario_runner),
) -> RunReport:
    """
    Run a scenario document to completion.

    Failed assertions are reported in the body (passed=false), not as an error status.

    :param request: Scenario document and optional seed override
    :param runner: Scenario runner instance
    :return: Full run report
    :raises ScenarioValidationException: If the scenario is invalid (400)
    :raises InvariantBreachException: If an internal invariant fails (500)
    """
    return runner.run_document(request.scenario, request.seed)
