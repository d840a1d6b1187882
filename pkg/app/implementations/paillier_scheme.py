"""
Paillier cryptosystem backed by python-paillier (phe).

phe draws its own primes from the OS; keys here are built from primes picked
by sympy.nextprime over a caller-supplied randomness source so they are
reproducible per scenario seed. Encryption passes the obfuscator r explicitly
for the same reason. Desk-scale key sizes only.
"""

import random

import structlog
from phe import EncodedNumber, EncryptedNumber, PaillierPrivateKey, PaillierPublicKey
from sympy import nextprime

from app.core.config import settings
from app.core.exceptions import MalformedKeyException, ProtocolException
from app.interfaces.homomorphic_scheme import IHomomorphicScheme
from app.services.crypto.wire import int_from_bytes, int_to_bytes, pack_fields, unpack_fields

logger = structlog.get_logger(__name__)


def _random_prime(bits: int, rng: random.Random) -> int:
    start = rng.getrandbits(bits) | (1 << (bits - 1)) | (1 << (bits - 2)) | 1
    return int(nextprime(start))


class PaillierScheme(IHomomorphicScheme):
    """Additively homomorphic encryption over Z_n with ciphertexts in Z_{n^2}."""

    name = "paillier"

    def __init__(self, key_bits: int | None = None):
        self.key_bits = key_bits or settings.he_key_bits
        if self.key_bits < 64:
            raise ValueError("plaintext space must hold at least 2^32")

    # ------------------------------------------------------------------
    # Key material
    # ------------------------------------------------------------------

    def keygen(self, rng: random.Random) -> tuple[bytes, bytes]:
        half = self.key_bits // 2
        while True:
            p = _random_prime(half, rng)
            q = _random_prime(half, rng)
            n = p * q
            if p != q and n.bit_length() == self.key_bits:
                break
        logger.debug("paillier_keypair_generated", bits=self.key_bits)
        return pack_fields(int_to_bytes(n)), pack_fields(int_to_bytes(n), int_to_bytes(p), int_to_bytes(q))

    @staticmethod
    def _public(public_key: bytes) -> PaillierPublicKey:
        try:
            (n_bytes,) = unpack_fields(public_key, expected=1)
        except ProtocolException as e:
            raise MalformedKeyException(f"paillier public key: {e}") from e
        n = int_from_bytes(n_bytes)
        if n < 2**32:
            raise MalformedKeyException("paillier modulus too small")
        return PaillierPublicKey(n)

    @classmethod
    def _secret(cls, secret_key: bytes) -> PaillierPrivateKey:
        try:
            n_bytes, p_bytes, q_bytes = unpack_fields(secret_key, expected=3)
        except ProtocolException as e:
            raise MalformedKeyException(f"paillier secret key: {e}") from e
        public = PaillierPublicKey(int_from_bytes(n_bytes))
        try:
            return PaillierPrivateKey(public, int_from_bytes(p_bytes), int_from_bytes(q_bytes))
        except ValueError as e:
            raise MalformedKeyException(f"paillier secret key: {e}") from e

    def plaintext_modulus(self, public_key: bytes) -> int:
        return self._public(public_key).n

    def ciphertext_size(self, public_key: bytes) -> int:
        return len(self._pack(0, self._public(public_key)))

    # ------------------------------------------------------------------
    # Ciphertexts are fixed width: bytes of n^2, independent of the value
    # ------------------------------------------------------------------

    @staticmethod
    def _pack(value: int, public: PaillierPublicKey) -> bytes:
        width = (public.nsquare.bit_length() + 7) // 8
        return pack_fields(int_to_bytes(value, width))

    @staticmethod
    def _unpack(ciphertext: bytes, public: PaillierPublicKey) -> EncryptedNumber:
        (body,) = unpack_fields(ciphertext, expected=1)
        return EncryptedNumber(public, int_from_bytes(body))

    def encrypt(self, public_key: bytes, plaintext: int, rng: random.Random) -> bytes:
        public = self._public(public_key)
        raw = public.raw_encrypt(plaintext % public.n, r_value=rng.randrange(1, public.n))
        return self._pack(raw, public)

    def decrypt(self, secret_key: bytes, ciphertext: bytes) -> int:
        private = self._secret(secret_key)
        return private.raw_decrypt(self._unpack(ciphertext, private.public_key).ciphertext(be_secure=False))

    def add(self, public_key: bytes, left: bytes, right: bytes) -> bytes:
        public = self._public(public_key)
        total = self._unpack(left, public) + self._unpack(right, public)
        return self._pack(total.ciphertext(be_secure=False), public)

    def scalar_mul(self, public_key: bytes, ciphertext: bytes, scalar: int) -> bytes:
        public = self._public(public_key)
        # exponent 0 keeps phe's float encoding out of the integer plaintext space
        product = self._unpack(ciphertext, public) * EncodedNumber(public, scalar % public.n, 0)
        return self._pack(product.ciphertext(be_secure=False), public)
