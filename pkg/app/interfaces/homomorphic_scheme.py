"""
Additively homomorphic public-key encryption interface used by PIR.

Keys and ciphertexts are scheme-opaque byte strings with a version tag. The
public key is passed to add/scalar_mul because the ciphertext group depends
on it.
"""

import random
from abc import ABC, abstractmethod


class IHomomorphicScheme(ABC):
    """Abstract interface for IND-CPA additively homomorphic encryption."""

    name: str

    @abstractmethod
    def keygen(self, rng: random.Random) -> tuple[bytes, bytes]:
        """
        Generate a keypair from an explicit randomness source.
        :param rng: Deterministic randomness source
        :return: (public key, secret key)
        """
        pass

    @abstractmethod
    def plaintext_modulus(self, public_key: bytes) -> int:
        """Plaintext space is integers mod this value (at least 2^32)."""
        pass

    @abstractmethod
    def encrypt(self, public_key: bytes, plaintext: int, rng: random.Random) -> bytes:
        """Probabilistic encryption of plaintext mod m."""
        pass

    @abstractmethod
    def decrypt(self, secret_key: bytes, ciphertext: bytes) -> int:
        """Recover the plaintext mod m."""
        pass

    @abstractmethod
    def add(self, public_key: bytes, left: bytes, right: bytes) -> bytes:
        """Ciphertext of the plaintext sum mod m."""
        pass

    @abstractmethod
    def scalar_mul(self, public_key: bytes, ciphertext: bytes, scalar: int) -> bytes:
        """Ciphertext of scalar times the plaintext mod m."""
        pass

    @abstractmethod
    def ciphertext_size(self, public_key: bytes) -> int:
        """Serialized ciphertext length; fixed for a given key."""
        pass
