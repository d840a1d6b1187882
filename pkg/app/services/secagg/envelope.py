"""
Sealed share envelopes relayed by the server.

AES-GCM under the channel agreement seed of the (sender, recipient) pair. The
nonce is derived from (session, sender, recipient): each pair seals exactly
one envelope per session, so it never repeats under a key.
"""

import hashlib

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from app.core.exceptions import ProtocolException
from app.services.crypto.wire import int_from_bytes, int_to_bytes, pack_fields, unpack_fields


def _associated_data(session_id: str, sender: int, recipient: int) -> bytes:
    return pack_fields(session_id.encode("utf-8"), int_to_bytes(sender, 4), int_to_bytes(recipient, 4))


def _nonce(associated_data: bytes) -> bytes:
    return hashlib.sha256(b"envelope" + associated_data).digest()[:12]


def seal(key: bytes, session_id: str, sender: int, recipient: int, b_share: bytes, key_share: bytes) -> bytes:
    """
    Encrypt one peer's pair of shares.
    :param key: 32-byte channel seed shared by sender and recipient
    :return: Ciphertext with tag
    """
    aad = _associated_data(session_id, sender, recipient)
    plaintext = pack_fields(int_to_bytes(sender, 4), int_to_bytes(recipient, 4), b_share, key_share)
    return AESGCM(key).encrypt(_nonce(aad), plaintext, aad)


def open_envelope(key: bytes, session_id: str, sender: int, recipient: int, envelope: bytes) -> tuple[bytes, bytes]:
    """
    Decrypt and check the envelope addressing.
    :return: (b_share bytes, key_share bytes)
    :raises ProtocolException: On authentication failure or misaddressed envelope
    """
    aad = _associated_data(session_id, sender, recipient)
    try:
        plaintext = AESGCM(key).decrypt(_nonce(aad), envelope, aad)
    except InvalidTag as e:
        raise ProtocolException(f"envelope {sender}->{recipient} failed authentication", "ENVELOPE_INVALID") from e
    claimed_sender, claimed_recipient, b_share, key_share = unpack_fields(plaintext, expected=4)
    if int_from_bytes(claimed_sender) != sender or int_from_bytes(claimed_recipient) != recipient:
        raise ProtocolException("envelope addressing does not match", "ENVELOPE_INVALID")
    return b_share, key_share
