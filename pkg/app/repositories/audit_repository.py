import json
from abc import abstractmethod
from collections.abc import Mapping

from app.core.constants import AUDIT_FIELD_ORDER
from app.core.exceptions import ValidationException
from app.core.utils import sha256_hex
from app.models.audit import AuditEvent
from app.repositories.base_repository import BaseRepository


class IAuditRepository(BaseRepository[int, AuditEvent]):
    """Abstract interface for the append-only audit log."""

    @abstractmethod
    def append(self, event: AuditEvent) -> AuditEvent:
        """Append one event. Events are never modified or removed."""
        pass

    @abstractmethod
    def to_jsonl(self) -> str:
        """Render the log as JSON Lines in append order."""
        pass

    @abstractmethod
    def digest(self) -> str:
        """SHA-256 over the canonical JSON Lines rendering."""
        pass

    @abstractmethod
    def query(self, filters: Mapping[str, str]) -> list[AuditEvent]:
        """Events whose rendered field values equal every filter value."""
        pass


def render_event(event: AuditEvent) -> str:
    """One JSON Lines row with the stable field order."""
    return json.dumps(event.to_ordered_dict(), separators=(",", ":"), ensure_ascii=False)


def event_matches(event: AuditEvent, filters: Mapping[str, str]) -> bool:
    """
    Compare rendered field values against string filters.

    null renders as "null", booleans as "true"/"false".

    :param event: Audit event
    :param filters: Field name -> expected rendered value
    :return: True if every filter matches
    """
    row = event.to_ordered_dict()
    for field, expected in filters.items():
        if field not in row:
            return False
        value = row[field]
        if value is None:
            rendered = "null"
        elif isinstance(value, bool):
            rendered = "true" if value else "false"
        else:
            rendered = str(value)
        if rendered != expected:
            return False
    return True


class AuditRepository(IAuditRepository):
    """In-memory audit log shared by the IPC broker and the gateway of a fleet."""

    def key_of(self, entity: AuditEvent) -> int:
        return len(self._items)

    def append(self, event: AuditEvent) -> AuditEvent:
        return self.create(event)

    def delete(self, id: int) -> bool:
        raise NotImplementedError("audit log is append-only")

    def to_jsonl(self) -> str:
        return "".join(render_event(event) + "\n" for event in self._items.values())

    def digest(self) -> str:
        return sha256_hex(self.to_jsonl().encode("utf-8"))

    def query(self, filters: Mapping[str, str]) -> list[AuditEvent]:
        return [event for event in self._items.values() if event_matches(event, filters)]

    def allowed_bytes_out(self) -> int:
        """Total bytes that left the sandbox under an Allow decision."""
        return sum(event.bytes_out for event in self._items.values() if event.allowed)


def parse_audit_filters(expressions: list[str]) -> dict[str, str]:
    """
    Parse `field=value` expressions; each may hold several comma-separated pairs.

    :param expressions: Filter expressions
    :return: Field name -> expected rendered value
    :raises ValidationException: If a pair lacks '=' or names an unknown field
    """
    filters: dict[str, str] = {}
    for expression in expressions:
        for pair in expression.split(","):
            field, sep, value = pair.partition("=")
            field = field.strip()
            if not sep or field not in AUDIT_FIELD_ORDER:
                raise ValidationException(f"invalid audit filter '{pair}'", "AUDIT_FILTER_INVALID")
            filters[field] = value.strip()
    return filters


def load_audit_log(text: str) -> AuditRepository:
    """
    Rebuild an audit log from its JSON Lines rendering.

    :raises ValidationException: If a line is not a valid audit event
    """
    repo = AuditRepository()
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            repo.append(AuditEvent.model_validate_json(line))
        except ValueError as e:
            raise ValidationException(f"audit line {number}: {e}", "AUDIT_LOG_INVALID") from e
    return repo
