"""
Key agreement interface for pairwise seeds.

Two implementations are interchangeable: Diffie-Hellman over X25519 and a
scenario-level trusted dealer that is cheaper at desk scale.
"""

from abc import ABC, abstractmethod


class IKeyAgreement(ABC):
    """Abstract interface for symmetric two-party key agreement."""

    name: str

    @abstractmethod
    def keygen(self, seed: bytes) -> tuple[bytes, bytes]:
        """
        Derive a keypair deterministically.

        :param seed: 32 bytes of per-entity randomness
        :return: (private key bytes, public key bytes)
        """
        pass

    @abstractmethod
    def agree(self, private_key: bytes, peer_public_key: bytes) -> bytes:
        """
        Compute the shared 32-byte seed; agree(a, B) == agree(b, A).

        :param private_key: Own private key
        :param peer_public_key: Peer public key
        :return: 32-byte seed
        :raises MalformedKeyException: If either key does not decode
        """
        pass
