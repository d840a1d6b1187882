"""
Length-prefixed binary framing shared by keys, ciphertexts, shares and protocol messages.

Layout: one version byte, then each field as a 4-byte big-endian length followed
by the field bytes.
"""

import struct

from app.core.constants import WIRE_VERSION
from app.core.exceptions import ProtocolException

_LENGTH = struct.Struct(">I")


def pack_fields(*fields: bytes, version: int = WIRE_VERSION) -> bytes:
    """
    Frame byte fields.
    :param fields: Field payloads in order
    :param version: Version tag
    :return: Framed bytes
    """
    out = bytearray([version])
    for field in fields:
        out += _LENGTH.pack(len(field))
        out += field
    return bytes(out)


def unpack_fields(data: bytes, expected: int | None = None, version: int = WIRE_VERSION) -> list[bytes]:
    """
    Parse framed bytes.
    :param data: Framed bytes
    :param expected: Required field count, if fixed
    :param version: Required version tag
    :return: Field payloads
    :raises ProtocolException: On version mismatch, truncation or wrong field count
    """
    if not data or data[0] != version:
        raise ProtocolException(f"unsupported wire version {data[0] if data else None}", error_code="WIRE_VERSION")
    fields: list[bytes] = []
    pos = 1
    while pos < len(data):
        if pos + _LENGTH.size > len(data):
            raise ProtocolException("truncated length prefix", error_code="WIRE_TRUNCATED")
        (length,) = _LENGTH.unpack_from(data, pos)
        pos += _LENGTH.size
        if pos + length > len(data):
            raise ProtocolException("truncated field", error_code="WIRE_TRUNCATED")
        fields.append(bytes(data[pos : pos + length]))
        pos += length
    if expected is not None and len(fields) != expected:
        raise ProtocolException(f"expected {expected} fields, got {len(fields)}", error_code="WIRE_SHAPE")
    return fields


def int_to_bytes(value: int, width: int | None = None) -> bytes:
    """Big-endian unsigned encoding, minimal width unless given."""
    size = width if width is not None else max(1, (value.bit_length() + 7) // 8)
    return value.to_bytes(size, "big")


def int_from_bytes(data: bytes) -> int:
    return int.from_bytes(data, "big")
