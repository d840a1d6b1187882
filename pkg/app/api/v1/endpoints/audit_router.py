"""
Audit API endpoints.
"""

from fastapi import APIRouter

from app.core.constants import AUDIT_FIELD_ORDER
from app.core.exceptions import ValidationException
from app.repositories.audit_repository import load_audit_log
from app.schemas.simulation_schemas import AuditQueryRequest, AuditQueryResponse

router = APIRouter(prefix="/audit", tags=["audit"])


@router.post("/query", response_model=AuditQueryResponse)
async def query_audit_log(request: AuditQueryRequest) -> AuditQueryResponse:
    """
    Filter an audit log by exact rendered field values.

    :param request: JSON Lines audit log and filters
    :return: Matching events in log order
    :raises ValidationException: If a filter names an unknown field or a line is malformed (400)
    """
    unknown = sorted(set(request.filters) - set(AUDIT_FIELD_ORDER))
    if unknown:
        raise ValidationException(f"unknown audit fields: {', '.join(unknown)}", "AUDIT_FILTER_INVALID")

    matches = load_audit_log(request.audit_log).query(request.filters)
    return AuditQueryResponse(events=[event.to_ordered_dict() for event in matches], count=len(matches))
