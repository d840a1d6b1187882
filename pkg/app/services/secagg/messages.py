"""
Secure aggregation wire messages.

Every message is framed with crypto.wire: header fields (session id, round
tag, sender index; the server is sender 0) followed by round-specific body
fields. Vectors travel as big-endian uint32.

    Advertise   device: [channel_pk, mask_pk]
                server: []
    ShareKeys   device: ([recipient u32], envelope)*
                server: ([index u32], channel_pk, mask_pk)*
    MaskedInput device: [vector]
                server: [U2 as u32*], ([sender u32], envelope)*
    Unmask      device: ([owner u32 + kind], share)*   kind b'b' self-mask, b'k' mask key
                server: [U2 as u32*], [U3 as u32*]
"""

import enum
import struct

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.config import settings
from app.core.constants import MAX_SECAGG_MODULUS
from app.core.exceptions import ProtocolException
from app.services.crypto.wire import int_from_bytes, int_to_bytes, pack_fields, unpack_fields

SERVER_SENDER = 0
B_SHARE = b"b"
KEY_SHARE = b"k"


class SecAggRound(enum.IntEnum):
    ADVERTISE = 1
    SHARE_KEYS = 2
    MASKED_INPUT = 3
    UNMASK = 4
    DONE = 5

    @property
    def label(self) -> str:
        return {1: "Advertise", 2: "ShareKeys", 3: "MaskedInput", 4: "Unmask", 5: "Done"}[self.value]


class SecAggConfig(BaseModel):
    """n devices, threshold t, dimension d, sum modulus M."""

    n: int = Field(ge=1)
    t: int = Field(ge=1)
    d: int = Field(ge=1)
    modulus: int = Field(default=settings.secagg_modulus, ge=2, le=MAX_SECAGG_MODULUS)
    session_id: str = Field(default="session", min_length=1)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_threshold(self) -> "SecAggConfig":
        if self.t > self.n:
            raise ValueError(f"threshold {self.t} exceeds device count {self.n}")
        return self


def encode_indices(indices: list[int]) -> bytes:
    return b"".join(struct.pack(">I", i) for i in sorted(indices))


def decode_indices(data: bytes) -> list[int]:
    if len(data) % 4:
        raise ProtocolException("index list is not a multiple of 4 bytes")
    return [value for (value,) in struct.iter_unpack(">I", data)]


def encode_vector(vector: np.ndarray) -> bytes:
    return np.asarray(vector, dtype=np.int64).astype(">u4").tobytes()


def decode_vector(data: bytes) -> np.ndarray:
    if len(data) % 4:
        raise ProtocolException("vector body is not a multiple of 4 bytes")
    return np.frombuffer(data, dtype=">u4").astype(np.int64)


class SecAggMessage(BaseModel):
    """Framed message: header plus opaque body fields."""

    session_id: str
    round: SecAggRound
    sender: int = Field(ge=0)
    body: tuple[bytes, ...] = ()

    model_config = ConfigDict(frozen=True)

    def to_bytes(self) -> bytes:
        return pack_fields(
            self.session_id.encode("utf-8"),
            bytes([int(self.round)]),
            int_to_bytes(self.sender, 4),
            *self.body,
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "SecAggMessage":
        fields = unpack_fields(data)
        if len(fields) < 3 or len(fields[1]) != 1:
            raise ProtocolException("malformed secagg header")
        try:
            round_tag = SecAggRound(fields[1][0])
        except ValueError as e:
            raise ProtocolException(f"unknown round tag {fields[1][0]}") from e
        return cls(
            session_id=fields[0].decode("utf-8"),
            round=round_tag,
            sender=int_from_bytes(fields[2]),
            body=tuple(fields[3:]),
        )

    def expect(self, session_id: str, round_tag: SecAggRound) -> "SecAggMessage":
        """Raise unless this message belongs to the session and round."""
        if self.session_id != session_id:
            raise ProtocolException(f"message for session '{self.session_id}', expected '{session_id}'")
        if self.round != round_tag:
            raise ProtocolException(f"round mismatch: got {self.round.label}, expected {round_tag.label}")
        return self

    def pairs(self) -> list[tuple[bytes, bytes]]:
        if len(self.body) % 2:
            raise ProtocolException("body fields are not paired")
        return [(self.body[i], self.body[i + 1]) for i in range(0, len(self.body), 2)]


# ----------------------------------------------------------------------
# Typed builders and readers
# ----------------------------------------------------------------------


def advertise_request(config: SecAggConfig) -> SecAggMessage:
    return SecAggMessage(session_id=config.session_id, round=SecAggRound.ADVERTISE, sender=SERVER_SENDER)


def advertise_keys(config: SecAggConfig, sender: int, channel_pk: bytes, mask_pk: bytes) -> SecAggMessage:
    return SecAggMessage(
        session_id=config.session_id, round=SecAggRound.ADVERTISE, sender=sender, body=(channel_pk, mask_pk)
    )


def public_key_directory(config: SecAggConfig, keys: dict[int, tuple[bytes, bytes]]) -> SecAggMessage:
    body: list[bytes] = []
    for index in sorted(keys):
        channel_pk, mask_pk = keys[index]
        body += [int_to_bytes(index, 4), channel_pk, mask_pk]
    return SecAggMessage(
        session_id=config.session_id, round=SecAggRound.SHARE_KEYS, sender=SERVER_SENDER, body=tuple(body)
    )


def read_public_key_directory(message: SecAggMessage) -> dict[int, tuple[bytes, bytes]]:
    if len(message.body) % 3:
        raise ProtocolException("public key directory is not in triples")
    return {
        int_from_bytes(message.body[i]): (message.body[i + 1], message.body[i + 2])
        for i in range(0, len(message.body), 3)
    }


def share_keys(config: SecAggConfig, sender: int, envelopes: dict[int, bytes]) -> SecAggMessage:
    body: list[bytes] = []
    for recipient in sorted(envelopes):
        body += [int_to_bytes(recipient, 4), envelopes[recipient]]
    return SecAggMessage(session_id=config.session_id, round=SecAggRound.SHARE_KEYS, sender=sender, body=tuple(body))


def read_indexed_pairs(fields: tuple[bytes, ...]) -> dict[int, bytes]:
    """([index u32], payload)* -> {index: payload}"""
    if len(fields) % 2:
        raise ProtocolException("body fields are not paired")
    return {int_from_bytes(fields[i]): fields[i + 1] for i in range(0, len(fields), 2)}


def envelope_delivery(config: SecAggConfig, survivors: list[int], envelopes: dict[int, bytes]) -> SecAggMessage:
    body: list[bytes] = [encode_indices(survivors)]
    for sender in sorted(envelopes):
        body += [int_to_bytes(sender, 4), envelopes[sender]]
    return SecAggMessage(
        session_id=config.session_id, round=SecAggRound.MASKED_INPUT, sender=SERVER_SENDER, body=tuple(body)
    )


def masked_input(config: SecAggConfig, sender: int, vector: np.ndarray) -> SecAggMessage:
    return SecAggMessage(
        session_id=config.session_id, round=SecAggRound.MASKED_INPUT, sender=sender, body=(encode_vector(vector),)
    )


def unmask_request(config: SecAggConfig, shared: list[int], masked: list[int]) -> SecAggMessage:
    return SecAggMessage(
        session_id=config.session_id,
        round=SecAggRound.UNMASK,
        sender=SERVER_SENDER,
        body=(encode_indices(shared), encode_indices(masked)),
    )


def unmask_reply(
    config: SecAggConfig, sender: int, b_shares: dict[int, bytes], key_shares: dict[int, bytes]
) -> SecAggMessage:
    body: list[bytes] = []
    for owner in sorted(b_shares):
        body += [int_to_bytes(owner, 4) + B_SHARE, b_shares[owner]]
    for owner in sorted(key_shares):
        body += [int_to_bytes(owner, 4) + KEY_SHARE, key_shares[owner]]
    return SecAggMessage(session_id=config.session_id, round=SecAggRound.UNMASK, sender=sender, body=tuple(body))


def read_unmask_reply(message: SecAggMessage) -> tuple[dict[int, bytes], dict[int, bytes]]:
    b_shares: dict[int, bytes] = {}
    key_shares: dict[int, bytes] = {}
    for tag, share_bytes in message.pairs():
        if len(tag) != 5 or tag[4:] not in (B_SHARE, KEY_SHARE):
            raise ProtocolException("malformed unmask share tag")
        owner = int_from_bytes(tag[:4])
        (b_shares if tag[4:] == B_SHARE else key_shares)[owner] = share_bytes
    return b_shares, key_shares
