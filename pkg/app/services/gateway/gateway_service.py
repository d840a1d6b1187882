"""
Private Compute Services gateway: the only way data leaves the sandbox.

Checks run in a fixed order and the first failing check names the Deny:
UnknownPolicy, NotSandboxPackage, NoInternet, Category, Channel, KAnonymity.
"""

from collections.abc import Mapping

import structlog

from app.core.config import settings
from app.models.audit import AuditEvent, AuditKind, Decision, DenyReason
from app.models.data import DataCategory
from app.models.egress import EgressPolicy, EgressRequest, PopulationHistogram
from app.repositories.audit_repository import IAuditRepository
from app.repositories.package_repository import IPackageRepository
from app.services.sandbox.clock import SimClock

logger = structlog.get_logger(__name__)


def check_k_anonymity(value: bytes, histogram: PopulationHistogram | Mapping[bytes, int], k: int) -> bool:
    """
    :param value: Metadata value about to leave
    :param histogram: Population counts per value
    :param k: Cohort minimum
    :return: True iff at least k devices hold the value (absent values count 0)
    """
    if isinstance(histogram, PopulationHistogram):
        return histogram.count(value) >= k
    return histogram.get(value, 0) >= k


class GatewayService:
    """Egress adjudication for one device. The audit log is shared across the fleet."""

    def __init__(
        self,
        packages: IPackageRepository,
        policies: Mapping[str, EgressPolicy],
        audit_repo: IAuditRepository,
        clock: SimClock,
        histogram: PopulationHistogram | None = None,
        device: str | None = None,
    ):
        self.packages = packages
        self.policies = dict(policies)
        self.audit_repo = audit_repo
        self.clock = clock
        self.histogram = histogram or PopulationHistogram()
        self.device = device

    def gate(self, request: EgressRequest) -> Decision:
        """
        Adjudicate one egress attempt and append exactly one audit event.

        bytes_out is the payload length on Allow and 0 on every Deny.

        :param request: Egress attempt
        :return: Allow or Deny(reason)
        """
        decision = self._decide(request)
        destination = request.destination if not request.channel.is_network else settings.pcs_package
        self.audit_repo.append(
            AuditEvent(
                t=self.clock.now,
                kind=AuditKind.EGRESS,
                src=request.requester,
                dst=destination,
                decision=decision.label,
                reason=decision.reason.value if decision.reason else None,
                channel=request.channel.value,
                category=request.descriptor.category.value,
                bytes_out=len(request.payload) if decision.allowed else 0,
                feature=request.feature,
                user_action=request.user_action,
                device=self.device,
            )
        )
        log = logger.info if decision.allowed else logger.warning
        log(
            "egress_adjudicated",
            requester=request.requester,
            channel=request.channel.value,
            category=request.descriptor.category.value,
            decision=str(decision),
            device=self.device,
        )
        return decision

    def _decide(self, request: EgressRequest) -> Decision:
        policy = self.policies.get(request.policy_id)
        if policy is None:
            return Decision.deny(DenyReason.UNKNOWN_POLICY)

        if not self.packages.exists(request.requester):
            return Decision.deny(DenyReason.NOT_SANDBOX_PACKAGE)
        manifest = self.packages.get_manifest(request.requester)
        if not manifest.in_pcc:
            return Decision.deny(DenyReason.NOT_SANDBOX_PACKAGE)
        if manifest.holds_internet:
            return Decision.deny(DenyReason.NO_INTERNET)

        category = request.descriptor.category
        if not policy.permits_category(category, request.channel):
            return Decision.deny(DenyReason.CATEGORY)
        if request.channel not in policy.allowed_channels:
            return Decision.deny(DenyReason.CHANNEL)
        if category == DataCategory.METADATA and not check_k_anonymity(request.payload, self.histogram, policy.k):
            return Decision.deny(DenyReason.K_ANONYMITY)
        return Decision.allow()
