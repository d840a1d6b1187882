"""
Delegated UI: a feature-owned surface embedded in another app.

The embedding app can only ask how many candidates are shown. Candidate text
reaches it only when the user taps one, and that release is a user-authorized
FrameworkSurface egress through the gateway.
"""

from dataclasses import dataclass, field

import structlog

from app.core.config import settings
from app.core.constants import ASI_PACKAGE
from app.models.audit import Decision
from app.models.data import DataCategory, DataDescriptor, DataSource
from app.models.egress import Channel, EgressRequest
from app.models.features import KeystrokeFilterState, ReplyCandidate
from app.services.features.feature_host import FeatureHost
from app.services.features.keystroke_filter import keystroke_filter
from app.services.gateway.gateway_service import GatewayService

logger = structlog.get_logger(__name__)

SURFACE_POLICY_ID = "framework_surface"


@dataclass
class DelegatedSurface:
    """
    Rendered candidates. Only observable_count is part of the embedding app's view.
    """

    surface_id: str
    target_app: str
    handle_id: str
    _candidates: list[ReplyCandidate] = field(default_factory=list, repr=False)
    _visible: list[ReplyCandidate] = field(default_factory=list, repr=False)
    stale: bool = False

    @property
    def observable_count(self) -> int:
        return len(self._visible)


class DelegatedUiService:
    """Renders surfaces, answers target observations and releases tapped text."""

    def __init__(
        self,
        gateway: GatewayService,
        host: FeatureHost,
        package: str = ASI_PACKAGE,
        policy_id: str = SURFACE_POLICY_ID,
        freeze_threshold: int | None = None,
    ):
        self.gateway = gateway
        self.host = host
        self.package = package
        self.policy_id = policy_id
        self.freeze_threshold = settings.keystroke_freeze_threshold if freeze_threshold is None else freeze_threshold
        self.observations: list[tuple[str, int]] = []  # everything a target app was shown
        self.released_bytes = 0
        self._sequence = 0

    def render(self, candidates: list[ReplyCandidate], target_app: str) -> DelegatedSurface:
        self._sequence += 1
        handle = self.host.handle()
        surface = DelegatedSurface(
            surface_id=f"surface-{self._sequence}",
            target_app=target_app,
            handle_id=handle.handle_id,
            _candidates=list(candidates),
            _visible=list(candidates),
        )
        self.host.write(self._state_key(surface), KeystrokeFilterState(freeze_threshold=self.freeze_threshold))
        logger.debug("delegated_surface_rendered", surface=surface.surface_id, target=target_app)
        return surface

    def target_observe(self, surface: DelegatedSurface) -> int:
        """What the embedding app can learn: the number of visible candidates."""
        count = surface.observable_count
        self.observations.append((surface.target_app, count))
        return count

    def type_key(self, surface: DelegatedSurface, key: str) -> int:
        """
        Feed one keystroke to the surface's filter.

        A surface is bound to the process generation that rendered it; once
        that process rotates the surface is stale and ignores keys.

        :return: Observable count after the key
        """
        if self._is_stale(surface):
            logger.info("delegated_surface_stale", surface=surface.surface_id)
            return surface.observable_count
        state = self.host.read(self._state_key(surface))
        state, visible = keystroke_filter(state, key, surface._candidates)
        self.host.write(self._state_key(surface), state)
        surface._visible = visible
        return surface.observable_count

    def filter_state(self, surface: DelegatedSurface) -> KeystrokeFilterState | None:
        if self._is_stale(surface):
            return None
        return self.host.read(self._state_key(surface))

    def tap(self, surface: DelegatedSurface, index: int) -> str | None:
        """
        Release the tapped candidate's text to the embedding app.

        :param surface: Rendered surface
        :param index: Position among the visible candidates
        :return: Text delivered to the target, or None if out of range or denied
        """
        if not 0 <= index < len(surface._visible):
            return None
        candidate = surface._visible[index]
        payload = candidate.text.encode("utf-8")
        request = EgressRequest(
            requester=self.package,
            descriptor=DataDescriptor.for_source(DataCategory.DERIVED, DataSource.SCREEN_CAPTURE, candidate.source_app),
            channel=Channel.FRAMEWORK_SURFACE,
            payload=payload,
            policy_id=self.policy_id,
            feature="delegated_ui",
            user_action=True,
            destination=surface.target_app,
        )
        decision: Decision = self.gateway.gate(request)
        if not decision.allowed:
            return None
        surface._candidates = [c for c in surface._candidates if c is not candidate]
        surface._visible = [c for c in surface._visible if c is not candidate]
        self.released_bytes += len(payload)
        return candidate.text

    def _is_stale(self, surface: DelegatedSurface) -> bool:
        if not surface.stale and self.host.handle().handle_id != surface.handle_id:
            surface.stale = True
        return surface.stale

    @staticmethod
    def _state_key(surface: DelegatedSurface) -> str:
        return f"keystroke:{surface.surface_id}"
