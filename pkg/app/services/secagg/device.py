"""Device-side state machine of the four-round masked-sum protocol."""

import numpy as np
import structlog

from app.core.exceptions import ProtocolException, SecAggAbortException
from app.core.utils import derive_bytes, derive_rng
from app.interfaces.key_agreement import IKeyAgreement
from app.services.crypto.prg import expand
from app.services.crypto.shamir import ByteSecretShare, share_bytes
from app.services.secagg import messages as wire
from app.services.secagg.envelope import open_envelope, seal
from app.services.secagg.messages import SecAggConfig, SecAggMessage, SecAggRound

logger = structlog.get_logger(__name__)


def apply_masks(
    x: np.ndarray,
    self_mask: np.ndarray,
    pairwise: dict[int, np.ndarray],
    index: int,
    modulus: int,
) -> np.ndarray:
    """
    y = x + self_mask + sum_{j>i} p_ij - sum_{j<i} p_ij  (mod M)

    :param x: Input vector
    :param self_mask: expand(b_i)
    :param pairwise: peer index -> expand(s_ij)
    :param index: Own index i
    :param modulus: M
    :return: Masked vector
    """
    y = (np.asarray(x, dtype=np.int64) + self_mask) % modulus
    for peer, mask in pairwise.items():
        if peer > index:
            y = (y + mask) % modulus
        elif peer < index:
            y = (y - mask) % modulus
    return y


class SecAggDevice:
    """
    One device's protocol state.

    Holds two agreement keypairs: a channel pair for sealing share envelopes
    and a mask pair for pairwise seeds. Only the mask private key and the
    self-mask seed b_i are secret-shared.
    """

    def __init__(
        self,
        index: int,
        config: SecAggConfig,
        x: np.ndarray,
        agreement: IKeyAgreement,
        root_seed: int,
    ):
        if not 1 <= index <= config.n:
            raise ValueError(f"device index {index} outside 1..{config.n}")
        vector = np.asarray(x, dtype=np.int64)
        if vector.shape != (config.d,):
            raise ValueError(f"input has shape {vector.shape}, expected ({config.d},)")

        self.index = index
        self.config = config
        self.agreement = agreement
        self.round = SecAggRound.ADVERTISE
        self._x: np.ndarray | None = vector % config.modulus

        labels = ("secagg", config.session_id, index)
        self.channel_sk, self.channel_pk = agreement.keygen(derive_bytes(root_seed, *labels, "channel"))
        self.mask_sk, self.mask_pk = agreement.keygen(derive_bytes(root_seed, *labels, "mask"))
        self.self_mask_seed = derive_bytes(root_seed, *labels, "self_mask")
        self._share_rng = derive_rng(root_seed, *labels, "shares")

        self._directory: dict[int, tuple[bytes, bytes]] = {}
        self._held_b_shares: dict[int, bytes] = {}
        self._held_key_shares: dict[int, bytes] = {}

    def self_mask(self) -> np.ndarray:
        return expand(self.self_mask_seed, self.config.d, self.config.modulus)

    def pairwise_seed(self, peer: int) -> bytes:
        _, peer_mask_pk = self._directory[peer]
        return self.agreement.agree(self.mask_sk, peer_mask_pk)

    def step(self, broadcast: SecAggMessage) -> SecAggMessage:
        """
        Consume the server broadcast for the current round and answer it.

        :param broadcast: Server message for this device's round
        :return: Message to the server
        :raises ProtocolException: Round or session mismatch
        :raises SecAggAbortException: Survivor set below threshold
        """
        if self.round == SecAggRound.DONE:
            raise ProtocolException(f"device {self.index} already finished")
        broadcast.expect(self.config.session_id, self.round)

        handler = {
            SecAggRound.ADVERTISE: self._advertise,
            SecAggRound.SHARE_KEYS: self._share_keys,
            SecAggRound.MASKED_INPUT: self._masked_input,
            SecAggRound.UNMASK: self._unmask,
        }[self.round]
        message = handler(broadcast)
        logger.debug("secagg_device_step", device=self.index, round=self.round.label)
        self.round = SecAggRound(self.round + 1)
        return message

    def _require(self, survivors: list[int]) -> None:
        if self.index not in survivors:
            raise ProtocolException(f"device {self.index} is not in the survivor set")
        if len(survivors) < self.config.t:
            raise SecAggAbortException("InsufficientSurvivors", self.round.label, len(survivors), self.config.t)

    def _advertise(self, broadcast: SecAggMessage) -> SecAggMessage:
        return wire.advertise_keys(self.config, self.index, self.channel_pk, self.mask_pk)

    def _share_keys(self, broadcast: SecAggMessage) -> SecAggMessage:
        self._directory = wire.read_public_key_directory(broadcast)
        self._require(sorted(self._directory))

        b_shares = share_bytes(self.self_mask_seed, self.config.t, self.config.n, self._share_rng)
        key_shares = share_bytes(self.mask_sk, self.config.t, self.config.n, self._share_rng)

        envelopes: dict[int, bytes] = {}
        for peer in sorted(self._directory):
            b_share = b_shares[peer - 1].to_bytes()
            key_share = key_shares[peer - 1].to_bytes()
            if peer == self.index:
                self._held_b_shares[peer] = b_share
                self._held_key_shares[peer] = key_share
                continue
            peer_channel_pk, _ = self._directory[peer]
            channel_key = self.agreement.agree(self.channel_sk, peer_channel_pk)
            envelopes[peer] = seal(channel_key, self.config.session_id, self.index, peer, b_share, key_share)
        return wire.share_keys(self.config, self.index, envelopes)

    def _masked_input(self, broadcast: SecAggMessage) -> SecAggMessage:
        if not broadcast.body:
            raise ProtocolException("missing survivor list")
        survivors = wire.decode_indices(broadcast.body[0])
        self._require(survivors)

        for sender, envelope in wire.read_indexed_pairs(broadcast.body[1:]).items():
            if sender not in survivors or sender == self.index:
                raise ProtocolException(f"unexpected envelope from device {sender}")
            peer_channel_pk, _ = self._directory[sender]
            channel_key = self.agreement.agree(self.channel_sk, peer_channel_pk)
            b_share, key_share = open_envelope(channel_key, self.config.session_id, sender, self.index, envelope)
            self._held_b_shares[sender] = b_share
            self._held_key_shares[sender] = key_share

        pairwise = {
            peer: expand(self.pairwise_seed(peer), self.config.d, self.config.modulus)
            for peer in survivors
            if peer != self.index
        }
        if self._x is None:
            raise ProtocolException("input already consumed")
        y = apply_masks(self._x, self.self_mask(), pairwise, self.index, self.config.modulus)
        self._x = None
        return wire.masked_input(self.config, self.index, y)

    def _unmask(self, broadcast: SecAggMessage) -> SecAggMessage:
        if len(broadcast.body) != 2:
            raise ProtocolException("unmask request needs two survivor lists")
        shared = wire.decode_indices(broadcast.body[0])
        masked = wire.decode_indices(broadcast.body[1])
        if not set(masked) <= set(shared):
            raise ProtocolException("masked-input survivors are not a subset of key sharers")
        self._require(masked)

        b_shares = {owner: self._held_b_shares[owner] for owner in masked}
        key_shares = {owner: self._held_key_shares[owner] for owner in shared if owner not in masked}
        return wire.unmask_reply(self.config, self.index, b_shares, key_shares)

    def held_share(self, owner: int, kind: bytes = wire.B_SHARE) -> ByteSecretShare:
        """Share of another device's secret held by this device."""
        held = self._held_b_shares if kind == wire.B_SHARE else self._held_key_shares
        return ByteSecretShare.from_bytes(held[owner])
