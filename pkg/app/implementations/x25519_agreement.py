from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric.x25519 import X25519PrivateKey, X25519PublicKey
from cryptography.hazmat.primitives.kdf.hkdf import HKDF
from cryptography.hazmat.primitives.serialization import Encoding, NoEncryption, PrivateFormat, PublicFormat

from app.core.constants import SEED_LENGTH
from app.core.exceptions import MalformedKeyException
from app.interfaces.key_agreement import IKeyAgreement

_HKDF_INFO = b"pcc-sim pairwise seed"


class X25519KeyAgreement(IKeyAgreement):
    """Elliptic-curve Diffie-Hellman over Curve25519, shared secret stretched with HKDF-SHA256."""

    name = "x25519"

    def keygen(self, seed: bytes) -> tuple[bytes, bytes]:
        try:
            private = X25519PrivateKey.from_private_bytes(seed)
        except ValueError as e:
            raise MalformedKeyException(f"x25519 seed: {e}") from e
        private_bytes = private.private_bytes(Encoding.Raw, PrivateFormat.Raw, NoEncryption())
        public_bytes = private.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)
        return private_bytes, public_bytes

    def agree(self, private_key: bytes, peer_public_key: bytes) -> bytes:
        try:
            private = X25519PrivateKey.from_private_bytes(private_key)
            peer = X25519PublicKey.from_public_bytes(peer_public_key)
            shared = private.exchange(peer)
        except ValueError as e:
            raise MalformedKeyException(f"x25519 key: {e}") from e
        return HKDF(algorithm=hashes.SHA256(), length=SEED_LENGTH, salt=None, info=_HKDF_INFO).derive(shared)
