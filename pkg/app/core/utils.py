"""Shared utility functions."""

import hashlib
import json
import random
from typing import Any


def canonical_json(value: Any) -> str:
    """
    Serialize to canonical JSON (sorted keys, compact separators).

    :param value: JSON-compatible value
    :return: Canonical JSON string
    """
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256_hex(data: bytes) -> str:
    """Hex SHA-256 of a byte string."""
    return hashlib.sha256(data).hexdigest()


def derive_bytes(root_seed: int, *labels: str | int, length: int = 32) -> bytes:
    """
    Derive deterministic bytes from a scenario seed and a stable label path.

    All simulator randomness flows through here so runs are reproducible from
    (seed, entity index) alone.

    :param root_seed: Scenario seed (unsigned 64-bit)
    :param labels: Stable path, e.g. ("secagg", session_id, device_index)
    :param length: Number of bytes to produce
    :return: Derived bytes
    """
    material = canonical_json([root_seed, *labels]).encode("utf-8")
    out = b""
    counter = 0
    while len(out) < length:
        out += hashlib.sha256(counter.to_bytes(4, "big") + material).digest()
        counter += 1
    return out[:length]


def derive_rng(root_seed: int, *labels: str | int) -> random.Random:
    """
    Seeded PRNG for non-key randomness (Shamir coefficients, HE obfuscators).

    :param root_seed: Scenario seed
    :param labels: Stable label path
    :return: Independent random.Random instance
    """
    return random.Random(int.from_bytes(derive_bytes(root_seed, *labels), "big"))
