"""
Download-only transport for global models.

The only request it can make is a bare uri that exactly matches an
allowlisted entry; there is no parameter for a body, header or query.
"""

import hashlib

import structlog
from pydantic import BaseModel, ConfigDict

from app.core.decorators import TransientTransportError, transport_retry
from app.models.audit import AuditEvent, AuditKind, Decision, DenyReason
from app.models.egress import Channel, DownloadManifest
from app.repositories.audit_repository import IAuditRepository
from app.services.sandbox.clock import SimClock

logger = structlog.get_logger(__name__)


class ModelServer:
    """
    Simulated remote model host.

    :param blobs: uri -> bytes served
    :param tamper: uri -> bit index flipped in the served bytes
    :param flaky: uri -> number of transient failures before it serves
    """

    def __init__(
        self,
        blobs: dict[str, bytes] | None = None,
        tamper: dict[str, int] | None = None,
        flaky: dict[str, int] | None = None,
    ):
        self.blobs = dict(blobs or {})
        self.tamper = dict(tamper or {})
        self.flaky = dict(flaky or {})
        self.requests: list[str] = []

    def serve(self, uri: str) -> bytes:
        """
        :raises TransientTransportError: While the uri is scheduled to fail
        :raises KeyError: If nothing is hosted at the uri
        """
        self.requests.append(uri)
        if self.flaky.get(uri, 0) > 0:
            self.flaky[uri] -= 1
            raise TransientTransportError(uri)
        blob = self.blobs[uri]
        bit = self.tamper.get(uri)
        if bit is None or not blob:
            return blob
        position = bit % (len(blob) * 8)
        mutated = bytearray(blob)
        mutated[position // 8] ^= 1 << (position % 8)
        return bytes(mutated)


class FetchResult(BaseModel):
    decision: Decision
    blob: bytes | None = None

    model_config = ConfigDict(frozen=True)


class DownloadOnlyTransport:
    """Allowlisted, digest-pinned model fetches for one device."""

    def __init__(
        self,
        manifest: DownloadManifest,
        server: ModelServer,
        audit_repo: IAuditRepository,
        clock: SimClock,
        device: str | None = None,
    ):
        self.manifest = manifest
        self.server = server
        self.audit_repo = audit_repo
        self.clock = clock
        self.device = device

    @transport_retry
    def _download(self, uri: str) -> bytes:
        return self.server.serve(uri)

    def fetch_model(self, uri: str, requester: str, feature: str | None = None) -> FetchResult:
        """
        Fetch an allowlisted model.

        The allowlist check happens before any simulated network activity.

        :param uri: Exact uri of the model
        :param requester: Sandbox package asking for the model
        :param feature: Feature name recorded in the audit event
        :return: Blob on Allow; Deny(NotAllowlisted | Unavailable | DigestMismatch) otherwise
        """
        expected = self.manifest.digest_for(uri)
        blob: bytes | None = None
        if expected is None:
            decision = Decision.deny(DenyReason.NOT_ALLOWLISTED)
        else:
            try:
                served = self._download(uri)
            except (TransientTransportError, KeyError):
                decision = Decision.deny(DenyReason.UNAVAILABLE)
            else:
                if hashlib.sha256(served).hexdigest() == expected:
                    decision, blob = Decision.allow(), served
                else:
                    decision = Decision.deny(DenyReason.DIGEST_MISMATCH)

        self.audit_repo.append(
            AuditEvent(
                t=self.clock.now,
                kind=AuditKind.DOWNLOAD,
                src=requester,
                dst=uri,
                decision=decision.label,
                reason=decision.reason.value if decision.reason else None,
                channel=Channel.DOWNLOAD_ONLY.value,
                bytes_in=len(blob) if blob is not None else 0,
                feature=feature,
                device=self.device,
            )
        )
        logger.info("model_fetch", uri=uri, decision=str(decision), device=self.device)
        return FetchResult(decision=decision, blob=blob)
