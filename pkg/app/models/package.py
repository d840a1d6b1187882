"""
Static policy universe: packages, permissions, roles, and association rules.

Manifests are the authority for every permission check of a sandbox package;
nothing grants permissions at runtime.
"""

import enum

from pydantic import BaseModel, ConfigDict

from app.core.constants import INSTALL_PERMISSIONS, INTERNET_PERMISSION, RUNTIME_PERMISSIONS
from app.core.validators import PackageId


class PermissionKind(str, enum.Enum):
    """How the platform grants a permission."""

    INSTALL = "Install"
    RUNTIME = "Runtime"
    SIGNATURE = "Signature"


class Role(str, enum.Enum):
    """Intelligence roles defined by the OS."""

    SYSTEM_UI_INTELLIGENCE = "SYSTEM_UI_INTELLIGENCE"
    SYSTEM_AMBIENT_AUDIO_INTELLIGENCE = "SYSTEM_AMBIENT_AUDIO_INTELLIGENCE"
    SYSTEM_AUDIO_INTELLIGENCE = "SYSTEM_AUDIO_INTELLIGENCE"
    SYSTEM_NOTIFICATION_INTELLIGENCE = "SYSTEM_NOTIFICATION_INTELLIGENCE"
    SYSTEM_TEXT_INTELLIGENCE = "SYSTEM_TEXT_INTELLIGENCE"
    SYSTEM_VISUAL_INTELLIGENCE = "SYSTEM_VISUAL_INTELLIGENCE"


def classify_permission(name: str) -> PermissionKind:
    """Classify a permission name by the platform's grant mechanism."""
    if name in RUNTIME_PERMISSIONS:
        return PermissionKind.RUNTIME
    if name in INSTALL_PERMISSIONS:
        return PermissionKind.INSTALL
    return PermissionKind.SIGNATURE


class Permission(BaseModel):
    """A declared permission."""

    name: str
    kind: PermissionKind

    model_config = ConfigDict(frozen=True)

    @classmethod
    def named(cls, name: str) -> "Permission":
        return cls(name=name, kind=classify_permission(name))


class PackageManifest(BaseModel):
    """Declared permissions, roles and sandbox membership of one package."""

    package: PackageId
    permissions: frozenset[Permission] = frozenset()
    roles: frozenset[Role] = frozenset()
    in_pcc: bool = False
    trusted_signature: bool = False
    egress_via: frozenset[PackageId] = frozenset()

    model_config = ConfigDict(frozen=True)

    @property
    def permission_names(self) -> frozenset[str]:
        return frozenset(p.name for p in self.permissions)

    def has_permission(self, name: str) -> bool:
        return name in self.permission_names

    @property
    def holds_internet(self) -> bool:
        return self.has_permission(INTERNET_PERMISSION)

    @property
    def holds_intelligence_role(self) -> bool:
        return bool(self.roles)

    def with_permission(self, name: str) -> "PackageManifest":
        """Copy of this manifest with one more permission."""
        return self.model_copy(update={"permissions": self.permissions | {Permission.named(name)}})


class AssociationRule(BaseModel):
    """Directional allow-association entry as written in the config."""

    target: PackageId
    allowed: PackageId

    model_config = ConfigDict(frozen=True)


def symmetric_closure(rules: list[AssociationRule]) -> frozenset[tuple[str, str]]:
    """
    Symmetric closure of the association rule set.

    :param rules: Directional rules
    :return: Set of (a, b) pairs containing both directions of every rule
    """
    pairs: set[tuple[str, str]] = set()
    for rule in rules:
        pairs.add((rule.target, rule.allowed))
        pairs.add((rule.allowed, rule.target))
    return frozenset(pairs)


class CddViolation(BaseModel):
    """A failed CDD 9.8.6 predicate for one package."""

    rule_id: str
    package: PackageId
    detail: str

    model_config = ConfigDict(frozen=True)
