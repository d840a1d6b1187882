import json

import structlog
from pydantic import ValidationError

from app.core.exceptions import ManifestValidationException
from app.models.package import PackageManifest, Permission, Role
from app.schemas.policy_schemas import ManifestDocument

logger = structlog.get_logger(__name__)

_ROLE_IDS = {role.value for role in Role}


def parse_manifest(text: str) -> PackageManifest:
    """
    Parse a JSON manifest document.

    Roles behave as a set (repeats collapse); repeated permissions are an error.

    :param text: UTF-8 JSON text
    :return: Populated manifest
    :raises ManifestValidationException: On invalid JSON, schema violations, unknown roles or duplicate permissions
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ManifestValidationException(f"invalid JSON at line {e.lineno}: {e.msg}") from e
    return manifest_from_dict(raw)


def manifest_from_dict(raw: object) -> PackageManifest:
    """Validate an already-decoded manifest document."""
    try:
        document = ManifestDocument.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        location = "/".join(str(part) for part in first["loc"])
        raise ManifestValidationException(f"/{location}: {first['msg']}") from e

    seen: set[str] = set()
    for name in document.permissions:
        if name in seen:
            raise ManifestValidationException(f"duplicate permission '{name}'")
        seen.add(name)

    unknown = [role for role in document.roles if role not in _ROLE_IDS]
    if unknown:
        raise ManifestValidationException(f"unknown role id '{unknown[0]}'")

    manifest = PackageManifest(
        package=document.package,
        permissions=frozenset(Permission.named(name) for name in document.permissions),
        roles=frozenset(Role(role) for role in document.roles),
        in_pcc=document.in_pcc,
        trusted_signature=document.trusted_signature,
        egress_via=frozenset(document.egress_via),
    )
    logger.debug(
        "manifest_parsed",
        package=manifest.package,
        permissions=len(manifest.permissions),
        roles=len(manifest.roles),
    )
    return manifest
