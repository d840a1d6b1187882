"""
Shamir threshold sharing over the prime field.

Byte secrets (agreement keys, seeds) are split into 7-byte chunks so every
chunk is a field element; all chunks of one share use the same x.
"""

import random

from pydantic import BaseModel, ConfigDict, Field
from sympy import mod_inverse

from app.core.config import settings
from app.core.exceptions import DuplicateShareException, InsufficientSharesException
from app.services.crypto.field import FieldElement
from app.services.crypto.wire import int_from_bytes, int_to_bytes, pack_fields, unpack_fields

CHUNK_BYTES = 7


class SecretShare(BaseModel):
    x: int = Field(ge=1)
    y: int = Field(ge=0)

    model_config = ConfigDict(frozen=True)


class ByteSecretShare(BaseModel):
    """Share of a byte string: one y per 7-byte chunk."""

    x: int = Field(ge=1)
    ys: tuple[int, ...]
    length: int = Field(ge=0)

    model_config = ConfigDict(frozen=True)

    def to_bytes(self) -> bytes:
        return pack_fields(
            int_to_bytes(self.x, 4),
            int_to_bytes(self.length, 4),
            *(int_to_bytes(y, 8) for y in self.ys),
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "ByteSecretShare":
        x, length, *ys = unpack_fields(data)
        return cls(x=int_from_bytes(x), length=int_from_bytes(length), ys=tuple(int_from_bytes(y) for y in ys))


def _evaluate(coefficients: list[int], x: int, prime: int) -> int:
    acc = 0
    for coefficient in reversed(coefficients):
        acc = (acc * x + coefficient) % prime
    return acc


def share(
    secret: FieldElement | int,
    threshold: int,
    count: int,
    rng: random.Random,
    prime: int | None = None,
) -> list[SecretShare]:
    """
    Split a secret into shares at x = 1..count.

    :param secret: Value to share
    :param threshold: Shares needed to reconstruct (t)
    :param count: Shares to produce (n)
    :param rng: Deterministic randomness source for the coefficients
    :param prime: Field prime (defaults to settings.field_prime)
    :return: count shares
    :raises ValueError: Unless 1 <= t <= n < p
    """
    p = prime or settings.field_prime
    if not 1 <= threshold <= count < p:
        raise ValueError(f"invalid sharing parameters t={threshold}, n={count}")
    constant = int(secret) % p
    coefficients = [constant] + [rng.randrange(p) for _ in range(threshold - 1)]
    return [SecretShare(x=x, y=_evaluate(coefficients, x, p)) for x in range(1, count + 1)]


def reconstruct(shares: list[SecretShare], threshold: int, prime: int | None = None) -> FieldElement:
    """
    Lagrange interpolation at 0 over the first `threshold` shares.

    :param shares: At least `threshold` shares with distinct x
    :param threshold: Reconstruction threshold
    :param prime: Field prime
    :return: The secret
    :raises InsufficientSharesException: Fewer shares than the threshold
    :raises DuplicateShareException: Two shares with the same x
    """
    p = prime or settings.field_prime
    if len(shares) < threshold:
        raise InsufficientSharesException(len(shares), threshold)
    seen: set[int] = set()
    for item in shares:
        if item.x in seen:
            raise DuplicateShareException(item.x)
        seen.add(item.x)

    points = shares[:threshold]
    secret = 0
    for i, share_i in enumerate(points):
        numerator, denominator = 1, 1
        for j, share_j in enumerate(points):
            if i != j:
                numerator = (numerator * -share_j.x) % p
                denominator = (denominator * (share_i.x - share_j.x)) % p
        lagrange = (numerator * int(mod_inverse(denominator, p))) % p
        secret = (secret + share_i.y * lagrange) % p
    return FieldElement(secret, p)


def share_bytes(
    secret: bytes, threshold: int, count: int, rng: random.Random, prime: int | None = None
) -> list[ByteSecretShare]:
    """Share a byte string chunk by chunk; share k of every chunk lands in byte share k."""
    chunks = [int_from_bytes(secret[i : i + CHUNK_BYTES]) for i in range(0, len(secret), CHUNK_BYTES)]
    per_chunk = [share(chunk, threshold, count, rng, prime) for chunk in chunks]
    return [
        ByteSecretShare(x=k + 1, ys=tuple(chunk_shares[k].y for chunk_shares in per_chunk), length=len(secret))
        for k in range(count)
    ]


def reconstruct_bytes(shares: list[ByteSecretShare], threshold: int, prime: int | None = None) -> bytes:
    """
    Inverse of share_bytes.
    :raises InsufficientSharesException: Fewer shares than the threshold
    :raises DuplicateShareException: Two shares with the same x
    """
    if len(shares) < threshold:
        raise InsufficientSharesException(len(shares), threshold)
    length = shares[0].length
    out = bytearray()
    for index in range(len(shares[0].ys)):
        chunk_shares = [SecretShare(x=s.x, y=s.ys[index]) for s in shares]
        value = int(reconstruct(chunk_shares, threshold, prime))
        width = min(CHUNK_BYTES, length - index * CHUNK_BYTES)
        out += int_to_bytes(value, width)
    return bytes(out)
