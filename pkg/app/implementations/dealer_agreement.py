from cryptography.hazmat.primitives import hashes, hmac

from app.core.constants import SEED_LENGTH
from app.core.exceptions import MalformedKeyException
from app.interfaces.key_agreement import IKeyAgreement

IDENTITY_BYTES = 16


class DealerKeyAgreement(IKeyAgreement):
    """
    Trusted-dealer pairwise seeds.

    The dealer hands every device the master secret inside its private key
    (master || identity); the public key is the bare identity. The pairwise
    seed is HMAC(master, sorted identities). Not a secure construction: the
    dealer and every device know all seeds. Used for speed in large runs.
    """

    name = "dealer"

    def __init__(self, master_secret: bytes):
        if len(master_secret) != SEED_LENGTH:
            raise MalformedKeyException("dealer master secret must be 32 bytes")
        self.master_secret = master_secret

    def keygen(self, seed: bytes) -> tuple[bytes, bytes]:
        identity = seed[:IDENTITY_BYTES]
        if len(identity) != IDENTITY_BYTES:
            raise MalformedKeyException("dealer keygen seed too short")
        return self.master_secret + identity, identity

    def agree(self, private_key: bytes, peer_public_key: bytes) -> bytes:
        if len(private_key) != SEED_LENGTH + IDENTITY_BYTES or len(peer_public_key) != IDENTITY_BYTES:
            raise MalformedKeyException("dealer key has the wrong length")
        master, own = private_key[:SEED_LENGTH], private_key[SEED_LENGTH:]
        low, high = sorted((own, peer_public_key))
        mac = hmac.HMAC(master, hashes.SHA256())
        mac.update(low + high)
        return mac.finalize()
