"""Deterministic seed expansion: ChaCha20 keystream with rejection sampling."""

import numpy as np
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms

from app.core.constants import SEED_LENGTH

_NONCE = bytes(16)
_BATCH_WORDS = 1024


def expand(seed: bytes, length: int, modulus: int) -> np.ndarray:
    """
    Expand a 32-byte seed into `length` integers uniform in [0, modulus).

    Words of the keystream that fall in the biased tail above the largest
    multiple of the modulus are skipped.

    :param seed: 32-byte seed
    :param length: Output length (>= 0)
    :param modulus: Output modulus (2 <= modulus <= 2^63)
    :return: int64 vector
    """
    if len(seed) != SEED_LENGTH:
        raise ValueError(f"seed must be {SEED_LENGTH} bytes")
    if length < 0 or not 2 <= modulus <= 2**63:
        raise ValueError("expand needs length >= 0 and 2 <= modulus <= 2^63")
    if length == 0:
        return np.zeros(0, dtype=np.int64)

    word_bits = 32 if modulus <= 2**32 else 64
    dtype = np.dtype(">u4") if word_bits == 32 else np.dtype(">u8")
    limit = (2**word_bits // modulus) * modulus

    encryptor = Cipher(algorithms.ChaCha20(seed, _NONCE), mode=None).encryptor()
    accepted: list[np.ndarray] = []
    have = 0
    while have < length:
        words = np.frombuffer(encryptor.update(bytes(_BATCH_WORDS * dtype.itemsize)), dtype=dtype).astype(np.uint64)
        if limit < 2**word_bits:
            words = words[words < np.uint64(limit)]
        accepted.append(words % np.uint64(modulus))
        have += len(words)
    return np.concatenate(accepted)[:length].astype(np.int64)
