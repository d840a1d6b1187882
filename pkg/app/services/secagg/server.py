"""Server-side state machine: collects round messages, relays envelopes, unmasks the sum."""

import numpy as np
import structlog

from app.core.exceptions import InvariantBreachException, ProtocolException, SecAggAbortException
from app.interfaces.key_agreement import IKeyAgreement
from app.services.crypto.prg import expand
from app.services.crypto.shamir import ByteSecretShare, reconstruct_bytes
from app.services.secagg import messages as wire
from app.services.secagg.messages import SecAggConfig, SecAggMessage, SecAggRound

logger = structlog.get_logger(__name__)


class SecAggServer:
    """
    Aggregation server for one session.

    Survivor sets shrink monotonically: a device whose message for a round
    does not arrive is never heard from again. For every device the server
    asks for exactly one kind of share, b-shares for masked-input survivors
    and mask-key shares for those who dropped before sending their input.
    """

    def __init__(self, config: SecAggConfig, agreement: IKeyAgreement):
        self.config = config
        self.agreement = agreement
        self.round = SecAggRound.ADVERTISE
        self.survivors: dict[SecAggRound, list[int]] = {}
        self._directory: dict[int, tuple[bytes, bytes]] = {}
        self._envelopes: dict[int, dict[int, bytes]] = {}
        self._masked_sum: np.ndarray | None = None
        self.b_reconstructions = 0
        self.key_reconstructions = 0
        self.output: np.ndarray | None = None

    def start(self) -> SecAggMessage:
        return wire.advertise_request(self.config)

    def _collect(self, messages: list[SecAggMessage], eligible: set[int]) -> list[SecAggMessage]:
        seen: set[int] = set()
        ordered = sorted(messages, key=lambda m: m.sender)
        for message in ordered:
            message.expect(self.config.session_id, self.round)
            if message.sender not in eligible:
                raise ProtocolException(f"device {message.sender} is not a survivor of the previous round")
            if message.sender in seen:
                raise ProtocolException(f"duplicate {self.round.label} message from device {message.sender}")
            seen.add(message.sender)

        survivors = sorted(seen)
        self.survivors[self.round] = survivors
        if len(survivors) < self.config.t:
            logger.warning(
                "secagg_abort", session=self.config.session_id, round=self.round.label, survivors=len(survivors)
            )
            raise SecAggAbortException("InsufficientSurvivors", self.round.label, len(survivors), self.config.t)
        return ordered

    def _previous(self) -> set[int]:
        if self.round == SecAggRound.ADVERTISE:
            return set(range(1, self.config.n + 1))
        return set(self.survivors[SecAggRound(self.round - 1)])

    def step(self, messages: list[SecAggMessage]) -> SecAggMessage | dict[int, SecAggMessage] | np.ndarray:
        """
        Close the current round.

        :param messages: Messages that arrived this round
        :return: Next broadcast (one for all, or one per recipient), or the final sum
        :raises SecAggAbortException: Fewer than t survivors
        :raises ProtocolException: Message from a non-survivor or for another round
        """
        ordered = self._collect(messages, self._previous())
        current = self.round
        self.round = SecAggRound(self.round + 1)
        logger.debug("secagg_server_step", round=current.label, survivors=len(ordered))

        if current == SecAggRound.ADVERTISE:
            self._directory = {m.sender: (m.body[0], m.body[1]) for m in ordered}
            return wire.public_key_directory(self.config, self._directory)

        if current == SecAggRound.SHARE_KEYS:
            survivors = self.survivors[SecAggRound.SHARE_KEYS]
            inbox: dict[int, dict[int, bytes]] = {recipient: {} for recipient in survivors}
            for message in ordered:
                for recipient, envelope in wire.read_indexed_pairs(message.body).items():
                    if recipient in inbox:
                        inbox[recipient][message.sender] = envelope
            self._envelopes = inbox
            return {
                recipient: wire.envelope_delivery(self.config, survivors, inbox[recipient]) for recipient in survivors
            }

        if current == SecAggRound.MASKED_INPUT:
            total = np.zeros(self.config.d, dtype=np.int64)
            for message in ordered:
                y = wire.decode_vector(message.body[0])
                if y.shape != (self.config.d,):
                    raise ProtocolException(f"masked input of device {message.sender} has wrong dimension")
                total = (total + y) % self.config.modulus
            self._masked_sum = total
            return wire.unmask_request(
                self.config, self.survivors[SecAggRound.SHARE_KEYS], self.survivors[SecAggRound.MASKED_INPUT]
            )

        return self._finish(ordered)

    def _finish(self, ordered: list[SecAggMessage]) -> np.ndarray:
        shared = self.survivors[SecAggRound.SHARE_KEYS]
        masked = self.survivors[SecAggRound.MASKED_INPUT]
        dropped = [j for j in shared if j not in masked]

        b_pool: dict[int, list[ByteSecretShare]] = {i: [] for i in masked}
        key_pool: dict[int, list[ByteSecretShare]] = {j: [] for j in dropped}
        for message in ordered:
            b_shares, key_shares = wire.read_unmask_reply(message)
            overlap = set(b_shares) & set(key_shares)
            if overlap:
                raise InvariantBreachException(
                    "secagg-share-exclusivity", f"device {message.sender} sent both share kinds for {sorted(overlap)}"
                )
            for owner, data in b_shares.items():
                if owner not in b_pool:
                    raise InvariantBreachException("secagg-share-exclusivity", f"unrequested b-share for {owner}")
                b_pool[owner].append(ByteSecretShare.from_bytes(data))
            for owner, data in key_shares.items():
                if owner not in key_pool:
                    raise InvariantBreachException("secagg-share-exclusivity", f"unrequested key share for {owner}")
                key_pool[owner].append(ByteSecretShare.from_bytes(data))

        assert self._masked_sum is not None
        modulus, d, t = self.config.modulus, self.config.d, self.config.t
        total = self._masked_sum.copy()

        for i in masked:
            seed = reconstruct_bytes(b_pool[i], t)
            self.b_reconstructions += 1
            total = (total - expand(seed, d, modulus)) % modulus

        for j in dropped:
            mask_sk = reconstruct_bytes(key_pool[j], t)
            self.key_reconstructions += 1
            for i in masked:
                _, mask_pk_i = self._directory[i]
                residual = expand(self.agreement.agree(mask_sk, mask_pk_i), d, modulus)
                # device i added +p_ij when j > i and -p_ij when j < i
                total = (total - residual) % modulus if j > i else (total + residual) % modulus

        self.output = total
        logger.info(
            "secagg_unmasked",
            session=self.config.session_id,
            survivors=len(masked),
            dropouts_recovered=len(dropped),
        )
        return total
