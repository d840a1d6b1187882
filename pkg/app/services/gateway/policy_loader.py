import json
from pathlib import Path

import structlog
from pydantic import TypeAdapter, ValidationError

from app.core.exceptions import ValidationException
from app.models.egress import DownloadEntry, DownloadManifest, EgressPolicy
from app.schemas.policy_schemas import PolicyDocument

logger = structlog.get_logger(__name__)

_DOWNLOAD_ENTRIES = TypeAdapter(list[DownloadEntry])


def _first_error(e: ValidationError) -> str:
    first = e.errors()[0]
    location = "/".join(str(part) for part in first["loc"])
    return f"/{location}: {first['msg']}"


def parse_policy(text: str) -> EgressPolicy:
    """
    Parse one egress policy document.
    :param text: JSON object with policy_id, allowed_categories, allowed_channels, k, notes
    :return: Validated policy
    :raises ValidationException: On invalid JSON or schema violations
    """
    try:
        document = PolicyDocument.model_validate_json(text)
    except ValidationError as e:
        raise ValidationException(f"invalid policy {_first_error(e)}", "POLICY_INVALID") from e
    return EgressPolicy.model_validate(document.model_dump())


def merge_policies(*groups: list[EgressPolicy]) -> dict[str, EgressPolicy]:
    """
    Index policies by id.
    :raises ValidationException: If two documents share a policy_id
    """
    table: dict[str, EgressPolicy] = {}
    for group in groups:
        for policy in group:
            if policy.policy_id in table:
                raise ValidationException(f"duplicate policy_id '{policy.policy_id}'", "POLICY_DUPLICATE")
            table[policy.policy_id] = policy
    return table


def load_policy_directory(directory: Path) -> list[EgressPolicy]:
    """Every *.json file of a directory, in file-name order."""
    policies = [parse_policy(path.read_text(encoding="utf-8")) for path in sorted(Path(directory).glob("*.json"))]
    logger.debug("policies_loaded", directory=str(directory), count=len(policies))
    return policies


def parse_download_manifest(text: str) -> DownloadManifest:
    """
    :param text: JSON array of {uri, sha256}
    :raises ValidationException: On invalid JSON or entries
    """
    try:
        entries = _DOWNLOAD_ENTRIES.validate_python(json.loads(text))
    except json.JSONDecodeError as e:
        raise ValidationException(f"invalid JSON at line {e.lineno}: {e.msg}", "DOWNLOAD_MANIFEST_INVALID") from e
    except ValidationError as e:
        raise ValidationException(f"invalid download manifest {_first_error(e)}", "DOWNLOAD_MANIFEST_INVALID") from e
    return DownloadManifest(entries=entries)
