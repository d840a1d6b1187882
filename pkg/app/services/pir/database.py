"""
PIR database: records padded into fixed-size blocks of plaintext limbs.

Block layout: 4-byte big-endian length prefix, payload, zero padding up to a
multiple of limb_size covering 4 + B bytes.
"""

import base64
import json
import math
from pathlib import Path

import structlog

from app.core.config import settings
from app.core.constants import PIR_LENGTH_PREFIX_BYTES
from app.core.exceptions import PirCorruptionException, PirIndexException

logger = structlog.get_logger(__name__)


def block_size(record_size: int, limb_size: int) -> int:
    return math.ceil((PIR_LENGTH_PREFIX_BYTES + record_size) / limb_size) * limb_size


def encode_block(record: bytes, record_size: int, limb_size: int) -> list[int]:
    """
    Record -> limbs.
    :raises ValueError: If the record is longer than record_size
    """
    if len(record) > record_size:
        raise ValueError(f"record of {len(record)} bytes exceeds record size {record_size}")
    size = block_size(record_size, limb_size)
    block = (len(record).to_bytes(PIR_LENGTH_PREFIX_BYTES, "big") + record).ljust(size, b"\x00")
    return [int.from_bytes(block[i : i + limb_size], "big") for i in range(0, size, limb_size)]


def decode_block(limbs: list[int], record_size: int, limb_size: int) -> bytes:
    """
    Limbs -> record, truncated to the stored length.
    :raises PirCorruptionException: Limb outside the byte range, wrong limb count or bad length prefix
    """
    expected = block_size(record_size, limb_size) // limb_size
    if len(limbs) != expected:
        raise PirCorruptionException(f"expected {expected} limbs, got {len(limbs)}")
    bound = 256**limb_size
    out = bytearray()
    for position, limb in enumerate(limbs):
        if not 0 <= limb < bound:
            raise PirCorruptionException(f"limb {position} decodes outside the byte range")
        out += limb.to_bytes(limb_size, "big")
    length = int.from_bytes(out[:PIR_LENGTH_PREFIX_BYTES], "big")
    if length > record_size:
        raise PirCorruptionException(f"length prefix {length} exceeds record size {record_size}")
    return bytes(out[PIR_LENGTH_PREFIX_BYTES : PIR_LENGTH_PREFIX_BYTES + length])


class PirDatabase:
    """Immutable snapshot of records; index order is fixed at load time."""

    def __init__(
        self,
        records: list[bytes],
        record_size: int | None = None,
        limb_size: int | None = None,
        names: list[str] | None = None,
    ):
        self.record_size = record_size or settings.pir_record_size
        self.limb_size = limb_size or settings.pir_limb_size
        if not records:
            raise PirIndexException("database must hold at least one record")
        if names is not None and len(names) != len(records):
            raise PirIndexException("one name per record required")
        self.records = [bytes(r) for r in records]
        self.blocks = [encode_block(r, self.record_size, self.limb_size) for r in self.records]
        self.names = list(names) if names is not None else [str(i) for i in range(len(records))]

    @property
    def size(self) -> int:
        return len(self.records)

    @property
    def limb_count(self) -> int:
        return block_size(self.record_size, self.limb_size) // self.limb_size

    @property
    def directory(self) -> dict[str, int]:
        """Public name -> index map. The directory itself is public metadata."""
        return {name: index for index, name in enumerate(self.names)}

    def index_of(self, name: str) -> int:
        try:
            return self.directory[name]
        except KeyError as e:
            raise PirIndexException(f"'{name}' is not in the directory") from e

    def limb(self, index: int, position: int) -> int:
        return self.blocks[index][position]

    @classmethod
    def from_mapping(cls, mapping: dict[str, bytes], **kwargs) -> "PirDatabase":
        """Names sorted lexicographically fix the index order."""
        names = sorted(mapping)
        return cls([mapping[name] for name in names], names=names, **kwargs)

    @classmethod
    def from_json(cls, text: str, **kwargs) -> "PirDatabase":
        """JSON object name -> base64 payload."""
        raw = json.loads(text)
        return cls.from_mapping({name: base64.b64decode(value) for name, value in raw.items()}, **kwargs)

    @classmethod
    def from_directory(cls, path: Path, **kwargs) -> "PirDatabase":
        """One record per regular file; the file name is the record name."""
        mapping = {entry.name: entry.read_bytes() for entry in Path(path).iterdir() if entry.is_file()}
        logger.debug("pir_database_loaded", path=str(path), records=len(mapping))
        return cls.from_mapping(mapping, **kwargs)
