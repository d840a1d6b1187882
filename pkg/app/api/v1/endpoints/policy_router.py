"""
Policy API endpoints.

Static CDD verification of a manifest against an association config.
"""

import structlog
from fastapi import APIRouter, Depends

from app.schemas.policy_schemas import VerifyRequest, VerifyResponse, ViolationResponse
from app.services.policy.association_parser import parse_association_config
from app.services.policy.cdd_verifier import CddVerifier
from app.services.policy.manifest_parser import manifest_from_dict
from app.services.service_dependencies import get_cdd_verifier

logger = structlog.get_logger(__name__)

router = APIRouter(prefix="/policy", tags=["policy"])


@router.post("/verify", response_model=VerifyResponse)
async def verify_manifest(
    request: VerifyRequest,
    verifier: CddVerifier = Depends(get_cdd_verifier),
) -> VerifyResponse:
    """
    Verify a manifest against CDD 9.8.6.

    :param request: Manifest document and association config text
    :param verifier: CDD verifier instance
    :return: Violations, advisories and an overall clean flag
    :raises ManifestValidationException: If the manifest is invalid (400)
    :raises PolicyParseException: If the association config is malformed (400)
    """
    manifest = manifest_from_dict(request.manifest)
    rules = parse_association_config(request.association_config)

    violations = verifier.verify(manifest, rules)
    advisories = verifier.advisories(manifest, rules)
    logger.info("manifest_verified_via_api", package=manifest.package, violations=len(violations))

    return VerifyResponse(
        violations=[ViolationResponse.model_validate(v.model_dump()) for v in violations],
        advisories=[ViolationResponse.model_validate(a.model_dump()) for a in advisories],
        clean=not violations,
    )
