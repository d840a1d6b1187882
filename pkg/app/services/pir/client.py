import random

import structlog
from pydantic import BaseModel, ConfigDict

from app.core.config import settings
from app.core.exceptions import PirCorruptionException, PirIndexException
from app.interfaces.homomorphic_scheme import IHomomorphicScheme
from app.services.crypto.wire import pack_fields, unpack_fields
from app.services.pir.database import block_size, decode_block

logger = structlog.get_logger(__name__)


class PirQuery(BaseModel):
    """Client public key and an encrypted one-hot selection vector."""

    public_key: bytes
    ciphertexts: tuple[bytes, ...]

    model_config = ConfigDict(frozen=True)

    def to_bytes(self) -> bytes:
        return pack_fields(self.public_key, *self.ciphertexts)

    @classmethod
    def from_bytes(cls, data: bytes) -> "PirQuery":
        public_key, *ciphertexts = unpack_fields(data)
        return cls(public_key=public_key, ciphertexts=tuple(ciphertexts))


class PirResponse(BaseModel):
    """One ciphertext per limb of a block."""

    ciphertexts: tuple[bytes, ...]

    model_config = ConfigDict(frozen=True)

    def to_bytes(self) -> bytes:
        return pack_fields(*self.ciphertexts)

    @classmethod
    def from_bytes(cls, data: bytes) -> "PirResponse":
        return cls(ciphertexts=tuple(unpack_fields(data)))


class PirClient:
    """Holds the secret key; builds queries and decodes responses."""

    def __init__(
        self,
        scheme: IHomomorphicScheme,
        rng: random.Random,
        record_size: int | None = None,
        limb_size: int | None = None,
    ):
        self.scheme = scheme
        self.rng = rng
        self.record_size = record_size or settings.pir_record_size
        self.limb_size = limb_size or settings.pir_limb_size
        self.public_key, self.secret_key = scheme.keygen(rng)
        if 256**self.limb_size > scheme.plaintext_modulus(self.public_key):
            raise ValueError(f"limb of {self.limb_size} bytes does not fit the plaintext space")

    def build_query(self, index: int, size: int) -> PirQuery:
        """
        Encrypt the one-hot vector e_index of length size.
        :raises PirIndexException: If index is outside [0, size)
        """
        if not 0 <= index < size:
            raise PirIndexException(f"index {index} outside database of {size} records")
        ciphertexts = tuple(
            self.scheme.encrypt(self.public_key, 1 if j == index else 0, self.rng) for j in range(size)
        )
        return PirQuery(public_key=self.public_key, ciphertexts=ciphertexts)

    def decode(self, response: PirResponse) -> bytes:
        """
        Decrypt limbs and strip the length prefix and padding.
        :raises PirCorruptionException: Wrong limb count or limbs outside the byte range
        """
        expected = block_size(self.record_size, self.limb_size) // self.limb_size
        if len(response.ciphertexts) != expected:
            raise PirCorruptionException(f"expected {expected} limbs, got {len(response.ciphertexts)}")
        limbs = [self.scheme.decrypt(self.secret_key, c) for c in response.ciphertexts]
        return decode_block(limbs, self.record_size, self.limb_size)
