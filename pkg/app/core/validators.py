import re
from typing import Annotated

from pydantic import AfterValidator

PACKAGE_ID_PATTERN = re.compile(r"[a-z][a-z0-9_]*(\.[a-z][a-z0-9_]*)+")


def validate_package_id(name: str) -> str:
    """
    Validate a reverse-dot package identifier.
    :param name: Raw package name
    :return: The unchanged name
    :raises ValueError: If the name does not match the package grammar
    """
    if not PACKAGE_ID_PATTERN.fullmatch(name):
        raise ValueError(f"'{name}' is not a valid package id")
    return name


def is_valid_package_id(name: str) -> bool:
    """Check a package name without raising."""
    return PACKAGE_ID_PATTERN.fullmatch(name) is not None


def validate_sha256_hex(digest: str) -> str:
    """Normalize a hex SHA-256 digest to lowercase"""
    lowered = digest.lower()
    if not re.fullmatch(r"[0-9a-f]{64}", lowered):
        raise ValueError("digest must be 64 hex characters")
    return lowered


PackageId = Annotated[str, AfterValidator(validate_package_id)]
Sha256Hex = Annotated[str, AfterValidator(validate_sha256_hex)]
