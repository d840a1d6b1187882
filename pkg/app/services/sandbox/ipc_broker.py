from collections import defaultdict

import structlog

from app.core.config import settings
from app.models.audit import AuditEvent, AuditKind, Decision, DenyReason
from app.models.ipc import IpcKind, IpcRequest
from app.models.package import AssociationRule, symmetric_closure
from app.repositories.audit_repository import IAuditRepository
from app.repositories.package_repository import IPackageRepository
from app.services.sandbox.clock import SimClock

logger = structlog.get_logger(__name__)


class IpcBroker:
    """
    Mediator for every inter-process call on one simulated device.

    Association checks use the symmetric closure of the rule set. FrameworkApi
    calls are proxied by the platform: no association check, but a per-package
    call budget per rate-limit window.
    """

    def __init__(
        self,
        packages: IPackageRepository,
        rules: list[AssociationRule],
        audit_repo: IAuditRepository,
        clock: SimClock,
        rate_limit: int | None = None,
        window_ms: int | None = None,
        device: str | None = None,
    ):
        self.packages = packages
        self.rules = list(rules)
        self.closure = symmetric_closure(self.rules)
        self.audit_repo = audit_repo
        self.clock = clock
        self.rate_limit = settings.framework_api_rate_limit if rate_limit is None else rate_limit
        self.window_ms = window_ms or settings.rate_limit_window_ms
        self.device = device
        self._framework_calls: dict[tuple[str, int], int] = defaultdict(int)

    def adjudicate(self, request: IpcRequest) -> Decision:
        """
        Decide an IPC attempt and append exactly one audit event.

        :param request: Attempted call
        :return: Allow, or Deny(UnknownPackage | NoAssociation | RateLimited)
        """
        decision = self._decide(request)
        self.audit_repo.append(
            AuditEvent(
                t=self.clock.now,
                kind=AuditKind.IPC,
                src=request.src,
                dst=request.dst,
                decision=decision.label,
                reason=decision.reason.value if decision.reason else None,
                category=request.payload_descriptor.category.value if request.payload_descriptor else None,
                device=self.device,
            )
        )
        logger.debug(
            "ipc_adjudicated",
            src=request.src,
            dst=request.dst,
            kind=request.kind.value,
            decision=str(decision),
            device=self.device,
        )
        return decision

    def framework_calls(self, package: str) -> int:
        """Calls counted against the package in the current window."""
        return self._framework_calls.get((package, self._window()), 0)

    def _window(self) -> int:
        return self.clock.now // self.window_ms

    def _decide(self, request: IpcRequest) -> Decision:
        if not self.packages.exists(request.src):
            return Decision.deny(DenyReason.UNKNOWN_PACKAGE)

        if not self.packages.exists(request.dst):
            return Decision.deny(DenyReason.UNKNOWN_PACKAGE)

        if request.kind == IpcKind.FRAMEWORK_API:
            key = (request.src, self._window())
            if self._framework_calls[key] >= self.rate_limit:
                return Decision.deny(DenyReason.RATE_LIMITED)
            self._framework_calls[key] += 1
            return Decision.allow()

        if (request.src, request.dst) in self.closure:
            return Decision.allow()
        return Decision.deny(DenyReason.NO_ASSOCIATION)


def adjudicate_ipc(
    request: IpcRequest,
    rules: list[AssociationRule],
    packages: IPackageRepository,
    audit_repo: IAuditRepository,
    clock: SimClock,
) -> Decision:
    """One-shot adjudication with a fresh broker (no rate-limit memory across calls)."""
    return IpcBroker(packages, rules, audit_repo, clock).adjudicate(request)
