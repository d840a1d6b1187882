"""
Domain exceptions for the simulator.

These exceptions are framework-independent and signal malformed input, caller
bugs, or aborted protocols. Policy outcomes (Deny, Dropped) are values, not
exceptions. The HTTP layer converts these via @app.exception_handler and the
CLI maps them to exit codes.
"""


class DomainException(Exception):
    """Base exception for all domain errors."""

    def __init__(self, message: str, error_code: str):
        super().__init__(message)
        self.message = message
        self.error_code = error_code


# ============================================================================
# Resource Not Found Exceptions
# ============================================================================


class NotFoundException(DomainException):
    """Base exception for resource not found errors."""

    def __init__(self, message: str, error_code: str = "NOT_FOUND"):
        super().__init__(message=message, error_code=error_code)


class UnknownPackageException(NotFoundException):
    """Package is not registered on the simulated device."""

    def __init__(self, package: str):
        super().__init__(message=f"Package '{package}' is not registered", error_code="UNKNOWN_PACKAGE")
        self.package = package


class RecordNotFoundException(NotFoundException):
    """Ephemeral record with given ID does not exist."""

    def __init__(self, record_id: str):
        super().__init__(message=f"Record '{record_id}' not found", error_code="RECORD_NOT_FOUND")
        self.record_id = record_id


# ============================================================================
# Validation Exceptions
# ============================================================================


class ValidationException(DomainException):
    """Base exception for validation errors."""

    def __init__(self, message: str, error_code: str = "VALIDATION_ERROR"):
        super().__init__(message=message, error_code=error_code)


class PolicyParseException(ValidationException):
    """Association config could not be parsed."""

    def __init__(self, message: str, line: int):
        super().__init__(message=f"line {line}: {message}", error_code="POLICY_PARSE_ERROR")
        self.line = line


class ManifestValidationException(ValidationException):
    """Manifest document violates the manifest schema."""

    def __init__(self, message: str):
        super().__init__(message=message, error_code="MANIFEST_INVALID")


class RoleConflictException(ValidationException):
    """A role is already held by another package on the device."""

    def __init__(self, role: str, holder: str, claimant: str):
        super().__init__(
            message=f"Role {role} already held by '{holder}', refused for '{claimant}'",
            error_code="ROLE_CONFLICT",
        )


class UntrustedSignatureException(ValidationException):
    """Sandbox package update without a trusted platform signature."""

    def __init__(self, package: str):
        super().__init__(message=f"Package '{package}' lacks a trusted signature", error_code="UNTRUSTED_SIGNATURE")


class InvalidIntervalException(ValidationException):
    """Time interval with start after end."""

    def __init__(self, start: int, end: int):
        super().__init__(message=f"Inverted interval [{start}, {end}]", error_code="INVALID_INTERVAL")


class ScenarioValidationException(ValidationException):
    """Scenario document failed validation at the given JSON pointer."""

    def __init__(self, pointer: str, message: str):
        super().__init__(message=f"{pointer or '/'}: {message}", error_code="SCENARIO_INVALID")
        self.pointer = pointer


# ============================================================================
# Sandbox Runtime Exceptions
# ============================================================================


class RecordExpiredException(DomainException):
    """Record TTL has elapsed; payload is no longer readable."""

    def __init__(self, record_id: str):
        super().__init__(message=f"Record '{record_id}' has expired", error_code="RECORD_EXPIRED")
        self.record_id = record_id


class InvalidProcessHandleException(DomainException):
    """Process handle was rotated away or never existed."""

    def __init__(self, handle_id: str):
        super().__init__(message=f"Process handle '{handle_id}' is no longer valid", error_code="INVALID_HANDLE")


# ============================================================================
# Crypto Exceptions
# ============================================================================


class CryptoException(DomainException):
    """Base exception for cryptographic primitive misuse."""

    def __init__(self, message: str, error_code: str = "CRYPTO_ERROR"):
        super().__init__(message=message, error_code=error_code)


class InsufficientSharesException(CryptoException):
    """Fewer shares supplied than the reconstruction threshold."""

    def __init__(self, supplied: int, threshold: int):
        super().__init__(
            message=f"Need {threshold} shares to reconstruct, got {supplied}", error_code="INSUFFICIENT_SHARES"
        )


class DuplicateShareException(CryptoException):
    """Two shares with the same evaluation point."""

    def __init__(self, x: int):
        super().__init__(message=f"Duplicate share evaluation point x={x}", error_code="DUPLICATE_SHARE")


class MalformedKeyException(CryptoException):
    """Key bytes do not decode to a valid key."""

    def __init__(self, message: str = "Malformed key"):
        super().__init__(message=message, error_code="MALFORMED_KEY")


# ============================================================================
# Protocol Exceptions
# ============================================================================


class ProtocolException(DomainException):
    """Protocol message out of order or inconsistent."""

    def __init__(self, message: str, error_code: str = "PROTOCOL_ERROR"):
        super().__init__(message=message, error_code=error_code)


class SecAggAbortException(ProtocolException):
    """Secure aggregation session aborted."""

    def __init__(self, reason: str, round_name: str, survivors: int, threshold: int):
        super().__init__(
            message=f"SecAgg aborted in {round_name}: {reason} ({survivors} survivors, threshold {threshold})",
            error_code="SECAGG_ABORT",
        )
        self.reason = reason
        self.round_name = round_name
        self.survivors = survivors
        self.threshold = threshold


class PirIndexException(ProtocolException):
    """PIR index or query shape does not match the database."""

    def __init__(self, message: str):
        super().__init__(message=message, error_code="PIR_INDEX_ERROR")


class PirCorruptionException(ProtocolException):
    """PIR response limbs decode to an impossible record."""

    def __init__(self, message: str):
        super().__init__(message=message, error_code="PIR_CORRUPTION")


# ============================================================================
# Simulation Exceptions
# ============================================================================


class InvariantBreachException(DomainException):
    """An internal invariant failed; the run must abort."""

    def __init__(self, invariant: str, detail: str):
        super().__init__(message=f"Invariant '{invariant}' violated: {detail}", error_code="INVARIANT_BREACH")
        self.invariant = invariant
