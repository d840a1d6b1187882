"""
Scenario loading: schema validation, then semantic checks that need files.

Every error names the JSON pointer of the offending value.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import structlog
from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import DomainException, PolicyParseException, ScenarioValidationException
from app.models.egress import EgressPolicy
from app.models.package import AssociationRule, PackageManifest
from app.schemas.scenario_schemas import EgressSpec, NowPlayingSpec, Scenario
from app.services.gateway.policy_loader import load_policy_directory, merge_policies
from app.services.policy.association_parser import parse_association_config
from app.services.policy.manifest_parser import parse_manifest

logger = structlog.get_logger(__name__)


@dataclass
class LoadedScenario:
    """A validated scenario with every referenced file resolved."""

    scenario: Scenario
    base_dir: Path
    policies: dict[str, EgressPolicy]
    manifests: list[list[PackageManifest]] = field(default_factory=list)  # per device
    rules: list[list[AssociationRule]] = field(default_factory=list)  # per device

    @property
    def device_names(self) -> list[str]:
        return self.scenario.device_names()


def _escape(part: str) -> str:
    return part.replace("~", "~0").replace("/", "~1")


def json_pointer(document: Any, loc: tuple[int | str, ...]) -> str:
    """
    Map a pydantic error location onto the raw document.

    Location parts that do not exist in the document (union tags) are skipped.
    """
    node = document
    parts: list[str] = []
    for part in loc:
        if isinstance(node, list) and isinstance(part, int) and 0 <= part < len(node):
            node = node[part]
            parts.append(str(part))
        elif isinstance(node, dict) and isinstance(part, str) and part in node:
            node = node[part]
            parts.append(_escape(part))
        elif isinstance(node, dict) and isinstance(part, str) and node.get("type") != part:
            # missing key: point at where it belongs
            parts.append(_escape(part))
            node = None
    return "/" + "/".join(parts) if parts else ""


def _resolve(path: str, base_dir: Path) -> Path:
    candidate = Path(path)
    if candidate.is_absolute():
        return candidate
    local = base_dir / candidate
    return local if local.exists() else settings.data_dir / candidate


def parse_scenario(text: str, base_dir: Path | None = None, policies_dir: Path | None = None) -> LoadedScenario:
    """
    Validate a scenario document and resolve its manifests, association configs and policies.

    :param text: Scenario JSON
    :param base_dir: Directory relative paths are resolved against before the data directory
    :param policies_dir: Shipped policy documents (defaults to data/policies)
    :return: Loaded scenario
    :raises ScenarioValidationException: With the JSON pointer of the first problem
    """
    base = base_dir or settings.data_dir
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioValidationException("", f"invalid JSON at line {e.lineno}: {e.msg}") from e

    try:
        scenario = Scenario.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise ScenarioValidationException(json_pointer(raw, first["loc"]), first["msg"]) from e

    if len(scenario.devices) > settings.max_devices:
        raise ScenarioValidationException("/devices", f"at most {settings.max_devices} devices are supported")

    try:
        shipped = load_policy_directory(policies_dir or settings.data_dir / "policies")
        policies = merge_policies(shipped, list(scenario.server.policies))
    except DomainException as e:
        raise ScenarioValidationException("/server/policies", e.message) from e

    loaded = LoadedScenario(scenario=scenario, base_dir=base, policies=policies)
    _check_devices(loaded)
    _check_server(loaded)
    logger.info("scenario_loaded", name=scenario.name, devices=len(scenario.devices), policies=len(policies))
    return loaded


def load_scenario(path: Path, policies_dir: Path | None = None) -> LoadedScenario:
    """
    :raises ScenarioValidationException: If the file is missing or invalid
    """
    path = Path(path)
    if not path.is_file():
        raise ScenarioValidationException("", f"scenario file '{path}' not found")
    return parse_scenario(path.read_text(encoding="utf-8"), base_dir=path.parent, policies_dir=policies_dir)


def _read_manifests(paths: list[str], pointer: str, base_dir: Path) -> list[PackageManifest]:
    manifests = []
    for position, name in enumerate(paths):
        resolved = _resolve(name, base_dir)
        if not resolved.is_file():
            raise ScenarioValidationException(f"{pointer}/{position}", f"manifest '{name}' not found")
        try:
            manifests.append(parse_manifest(resolved.read_text(encoding="utf-8")))
        except DomainException as e:
            raise ScenarioValidationException(f"{pointer}/{position}", e.message) from e
    return manifests


def _read_rules(name: str, pointer: str, base_dir: Path) -> list[AssociationRule]:
    resolved = _resolve(name, base_dir)
    if not resolved.is_file():
        raise ScenarioValidationException(pointer, f"association config '{name}' not found")
    try:
        return parse_association_config(resolved.read_text(encoding="utf-8"))
    except PolicyParseException as e:
        raise ScenarioValidationException(pointer, e.message) from e


def _check_devices(loaded: LoadedScenario) -> None:
    scenario = loaded.scenario
    seen: set[str] = set()
    for position, name in enumerate(scenario.device_names()):
        if name in seen:
            raise ScenarioValidationException(f"/devices/{position}/name", f"duplicate device name '{name}'")
        seen.add(name)

    default_manifests = _read_manifests(scenario.defaults.packages, "/defaults/packages", loaded.base_dir)
    default_rules = _read_rules(scenario.defaults.association_config, "/defaults/association_config", loaded.base_dir)

    for index, device in enumerate(scenario.devices):
        if device.packages is None:
            loaded.manifests.append(default_manifests)
        else:
            loaded.manifests.append(_read_manifests(device.packages, f"/devices/{index}/packages", loaded.base_dir))
        loaded.rules.append(default_rules)

        previous = 0
        for position, event in enumerate(device.events):
            pointer = f"/devices/{index}/events/{position}"
            if event.at_ms < previous:
                raise ScenarioValidationException(f"{pointer}/at_ms", "timestamps must be non-decreasing per device")
            previous = event.at_ms
            if isinstance(event, EgressSpec) and event.policy_id not in loaded.policies:
                raise ScenarioValidationException(f"{pointer}/policy_id", f"unknown policy_id '{event.policy_id}'")
            if isinstance(event, NowPlayingSpec) and scenario.server.pir is None:
                raise ScenarioValidationException(f"{pointer}/type", "now_playing needs a server.pir database")


def _check_server(loaded: LoadedScenario) -> None:
    scenario = loaded.scenario
    task_ids: list[str] = []
    for position, task in enumerate(scenario.server.fa_tasks):
        if task.policy_id not in loaded.policies:
            raise ScenarioValidationException(
                f"/server/fa_tasks/{position}/policy_id", f"unknown policy_id '{task.policy_id}'"
            )
        if task.task_id in task_ids:
            raise ScenarioValidationException(f"/server/fa_tasks/{position}/task_id", "duplicate task_id")
        task_ids.append(task.task_id)

    names = set(scenario.device_names())
    for position, entry in enumerate(scenario.dropout_schedule):
        if entry.device not in names:
            raise ScenarioValidationException(
                f"/dropout_schedule/{position}/device", f"unknown device '{entry.device}'"
            )
        if entry.task_id not in task_ids:
            raise ScenarioValidationException(
                f"/dropout_schedule/{position}/task_id", f"unknown task_id '{entry.task_id}'"
            )
