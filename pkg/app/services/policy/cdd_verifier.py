"""
Static verifier for the CDD 9.8.6 rules on sandbox packages.

The rules are STRONGLY RECOMMENDED in general and MUST for packages holding a
SYSTEM_*_INTELLIGENCE role: role holders get violations, everyone else gets
the same findings as advisories.
"""

import json
from collections.abc import Mapping

import structlog

from app.core.config import settings
from app.core.constants import (
    CDD_RULE_ASSOCIATION,
    CDD_RULE_EGRESS,
    CDD_RULE_INTERNET,
    DEFAULT_PARTNER_PACKAGES,
    INTERNET_PERMISSION,
)
from app.models.package import AssociationRule, CddViolation, PackageManifest

logger = structlog.get_logger(__name__)


class CddVerifier:
    """Evaluates the 9.8.6 predicates against one manifest and the association rules."""

    def __init__(
        self,
        partner_packages: Mapping[str, frozenset[str]] | None = None,
        pcs_package: str | None = None,
    ):
        """
        :param partner_packages: Partner category -> package names (defaults to the shipped association table)
        :param pcs_package: The only package network egress may be routed through
        """
        groups = partner_packages if partner_packages is not None else DEFAULT_PARTNER_PACKAGES
        self.allowed_partners: frozenset[str] = frozenset().union(*groups.values()) if groups else frozenset()
        self.pcs_package = pcs_package or settings.pcs_package

    def findings(self, manifest: PackageManifest, rules: list[AssociationRule]) -> list[CddViolation]:
        """
        Evaluate every rule regardless of role.

        :param manifest: Package under test
        :param rules: Parsed association rules
        :return: Findings in rule order (internet, egress, association partners in document order)
        """
        package = manifest.package
        found: list[CddViolation] = []

        if manifest.holds_internet:
            found.append(
                CddViolation(
                    rule_id=CDD_RULE_INTERNET,
                    package=package,
                    detail=f"requests {INTERNET_PERMISSION}",
                )
            )

        foreign_egress = sorted(p for p in manifest.egress_via if p != self.pcs_package)
        if foreign_egress:
            found.append(
                CddViolation(
                    rule_id=CDD_RULE_EGRESS,
                    package=package,
                    detail=f"egress via {', '.join(foreign_egress)} instead of {self.pcs_package}",
                )
            )

        reported: set[str] = set()
        for rule in rules:
            if rule.target == package:
                partner = rule.allowed
            elif rule.allowed == package:
                partner = rule.target
            else:
                continue
            if partner in self.allowed_partners or partner in reported:
                continue
            reported.add(partner)
            found.append(
                CddViolation(
                    rule_id=CDD_RULE_ASSOCIATION,
                    package=package,
                    detail=partner,
                )
            )

        return found

    def verify(self, manifest: PackageManifest, rules: list[AssociationRule]) -> list[CddViolation]:
        """Violations for intelligence-role holders; empty for everyone else."""
        if not manifest.holds_intelligence_role:
            return []
        violations = self.findings(manifest, rules)
        if violations:
            logger.warning("cdd_violations_found", package=manifest.package, count=len(violations))
        return violations

    def advisories(self, manifest: PackageManifest, rules: list[AssociationRule]) -> list[CddViolation]:
        """Findings for packages without an intelligence role."""
        if manifest.holds_intelligence_role:
            return []
        return self.findings(manifest, rules)


def verify_cdd(manifest: PackageManifest, rules: list[AssociationRule]) -> list[CddViolation]:
    """
    Statically verify CDD 9.8.6 with the default partner sets.

    :param manifest: Package manifest
    :param rules: Parsed association rules
    :return: Violations (total function, never raises)
    """
    return CddVerifier().verify(manifest, rules)


def collect_cdd_advisories(manifest: PackageManifest, rules: list[AssociationRule]) -> list[CddViolation]:
    """Same findings as verify_cdd, for packages without an intelligence role."""
    return CddVerifier().advisories(manifest, rules)


def violations_to_jsonl(violations: list[CddViolation]) -> str:
    """
    Render violations as JSON Lines with the stable field order (rule_id, package, detail).

    :param violations: Violations to render
    :return: One JSON object per line, newline terminated; empty string for none
    """
    lines = [
        json.dumps({"rule_id": v.rule_id, "package": v.package, "detail": v.detail}, separators=(",", ":"))
        for v in violations
    ]
    return "".join(line + "\n" for line in lines)
