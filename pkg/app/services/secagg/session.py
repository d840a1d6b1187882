"""
Harness driving n device state machines and one server through a session.

Rounds are barriers: every live device answers the round's broadcast, then the
server closes the round. A device scheduled to go silent in a round sends
nothing from that round on.
"""

from collections.abc import Callable, Mapping, Sequence

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict

from app.core.config import settings
from app.core.utils import derive_bytes, sha256_hex
from app.implementations.dealer_agreement import DealerKeyAgreement
from app.implementations.x25519_agreement import X25519KeyAgreement
from app.interfaces.key_agreement import IKeyAgreement
from app.services.secagg.device import SecAggDevice
from app.services.secagg.messages import SecAggConfig, SecAggMessage, SecAggRound
from app.services.secagg.server import SecAggServer

logger = structlog.get_logger(__name__)

# (device index, round, framed message bytes) -> delivered?
UplinkHook = Callable[[int, SecAggRound, bytes], bool]


class SecAggResult(BaseModel):
    """Outcome of a completed session."""

    session_id: str
    total: list[int]
    survivors: list[int]
    survivors_per_round: dict[str, int]
    b_reconstructions: int
    key_reconstructions: int
    transcript_digest: str
    uplink_bytes: int

    model_config = ConfigDict(frozen=True)


def make_agreement(kind: str | None, root_seed: int, session_id: str) -> IKeyAgreement:
    """
    Build the configured key agreement.
    :param kind: "x25519" or "dealer" (defaults to settings.key_agreement)
    """
    kind = kind or settings.key_agreement
    if kind == "dealer":
        return DealerKeyAgreement(derive_bytes(root_seed, "secagg", session_id, "dealer"))
    return X25519KeyAgreement()


class SecAggSession:
    """One run of the protocol with a transcript of every framed message."""

    def __init__(
        self,
        config: SecAggConfig,
        inputs: Sequence[np.ndarray],
        root_seed: int,
        dropouts: Mapping[int, SecAggRound] | None = None,
        agreement: IKeyAgreement | None = None,
        uplink: UplinkHook | None = None,
    ):
        if len(inputs) != config.n:
            raise ValueError(f"expected {config.n} inputs, got {len(inputs)}")
        self.config = config
        self.agreement = agreement or make_agreement(None, root_seed, config.session_id)
        self.devices = {
            index: SecAggDevice(index, config, inputs[index - 1], self.agreement, root_seed)
            for index in range(1, config.n + 1)
        }
        self.server = SecAggServer(config, self.agreement)
        self.dropouts = dict(dropouts or {})
        self.uplink = uplink
        self.transcript: list[bytes] = []
        self.uplink_bytes = 0
        self._silent: set[int] = set()

    def _is_silent(self, index: int, round_tag: SecAggRound) -> bool:
        if index in self._silent:
            return True
        drop_round = self.dropouts.get(index)
        if drop_round is not None and round_tag >= drop_round:
            self._silent.add(index)
            return True
        return False

    def _send(self, index: int, message: SecAggMessage) -> SecAggMessage | None:
        data = message.to_bytes()
        if self.uplink is not None and not self.uplink(index, message.round, data):
            self._silent.add(index)
            logger.info("secagg_uplink_denied", device=index, round=message.round.label)
            return None
        self.transcript.append(data)
        self.uplink_bytes += len(data)
        return SecAggMessage.from_bytes(data)

    def run(self) -> SecAggResult:
        """
        Drive all four rounds.
        :return: Sum of the masked-input survivors' inputs mod M
        :raises SecAggAbortException: If any round ends with fewer than t survivors
        """
        broadcast: SecAggMessage | dict[int, SecAggMessage] | np.ndarray = self.server.start()
        live = sorted(self.devices)

        for round_tag in (SecAggRound.ADVERTISE, SecAggRound.SHARE_KEYS, SecAggRound.MASKED_INPUT, SecAggRound.UNMASK):
            replies: list[SecAggMessage] = []
            for index in live:
                if self._is_silent(index, round_tag):
                    continue
                assert isinstance(broadcast, SecAggMessage | dict)
                incoming = broadcast[index] if isinstance(broadcast, dict) else broadcast
                self.transcript.append(incoming.to_bytes())
                delivered = self._send(index, self.devices[index].step(incoming))
                if delivered is not None:
                    replies.append(delivered)
            broadcast = self.server.step(replies)
            live = self.server.survivors[round_tag]

        assert isinstance(broadcast, np.ndarray)
        survivors = self.server.survivors[SecAggRound.MASKED_INPUT]
        return SecAggResult(
            session_id=self.config.session_id,
            total=[int(v) for v in broadcast],
            survivors=survivors,
            survivors_per_round={r.label: len(s) for r, s in self.server.survivors.items()},
            b_reconstructions=self.server.b_reconstructions,
            key_reconstructions=self.server.key_reconstructions,
            transcript_digest=sha256_hex(b"".join(self.transcript)),
            uplink_bytes=self.uplink_bytes,
        )


def run_session(
    config: SecAggConfig,
    inputs: Sequence[np.ndarray],
    root_seed: int,
    dropouts: Mapping[int, SecAggRound] | None = None,
    agreement: IKeyAgreement | None = None,
    uplink: UplinkHook | None = None,
) -> SecAggResult:
    """Run a full session; see SecAggSession."""
    return SecAggSession(config, inputs, root_seed, dropouts, agreement, uplink).run()
