"""
Unit tests for the append-only audit log, its JSON Lines rendering and the
query filters used by the CLI and the API.
"""

import json

import pytest

from app.core.exceptions import ValidationException
from app.models.audit import AuditEvent, AuditKind
from app.repositories.audit_repository import (
    AuditRepository,
    event_matches,
    load_audit_log,
    parse_audit_filters,
    render_event,
)


def _event(**overrides) -> AuditEvent:
    data = {
        "t": 0,
        "kind": AuditKind.EGRESS,
        "src": "com.google.android.as",
        "dst": "com.google.android.as.oss",
        "decision": "Allow",
        "channel": "FederatedCompute",
        "category": "Derived",
        "bytes_out": 7,
        "device": "phone",
    }
    data.update(overrides)
    return AuditEvent(**data)


@pytest.fixture
def populated():
    repo = AuditRepository()
    repo.append(_event())
    repo.append(_event(t=5, decision="Deny", reason="Category", category="Raw", bytes_out=0))
    repo.append(_event(t=9, kind=AuditKind.IPC, channel=None, bytes_out=0, user_action=True, device=None))
    return repo


@pytest.mark.unit
class TestAuditRepository:
    def test_append_keeps_order(self, populated):
        # Act & Assert
        assert [e.t for e in populated.get_all()] == [0, 5, 9]
        assert populated.count() == 3

    def test_append_only(self, populated):
        with pytest.raises(NotImplementedError):
            populated.delete(0)

    def test_allowed_bytes_out(self, populated):
        assert populated.allowed_bytes_out() == 7

    def test_jsonl_field_order(self, populated):
        # Act
        first_line = populated.to_jsonl().splitlines()[0]

        # Assert
        assert list(json.loads(first_line)) == [
            "t",
            "kind",
            "src",
            "dst",
            "decision",
            "reason",
            "channel",
            "category",
            "bytes_out",
            "bytes_in",
            "feature",
            "user_action",
            "device",
        ]
        assert first_line == render_event(populated.get_all()[0])
        assert " " not in first_line

    def test_digest_tracks_content(self, populated):
        # Arrange
        before = populated.digest()

        # Act
        populated.append(_event(t=10))

        # Assert
        assert populated.digest() != before
        assert len(before) == 64

    def test_reload_reproduces_digest(self, populated):
        # Act
        reloaded = load_audit_log(populated.to_jsonl())

        # Assert
        assert reloaded.digest() == populated.digest()

    def test_reload_rejects_bad_line(self):
        # Act & Assert
        with pytest.raises(ValidationException) as exc_info:
            load_audit_log('{"t": 0}\n')
        assert exc_info.value.error_code == "AUDIT_LOG_INVALID"
        assert "line 1" in exc_info.value.message


@pytest.mark.unit
class TestAuditQuery:
    def test_filters_compare_rendered_values(self, populated):
        # Act & Assert
        assert [e.t for e in populated.query({"decision": "Deny", "reason": "Category"})] == [5]
        assert [e.t for e in populated.query({"user_action": "true"})] == [9]
        assert [e.t for e in populated.query({"device": "null"})] == [9]
        assert [e.t for e in populated.query({"bytes_out": "7"})] == [0]

    def test_empty_filter_matches_all(self, populated):
        assert len(populated.query({})) == 3

    def test_unknown_field_never_matches(self):
        assert not event_matches(_event(), {"colour": "red"})

    def test_parse_comma_separated_pairs(self):
        # Act
        filters = parse_audit_filters(["decision=Deny, reason=Category", "device=phone"])

        # Assert
        assert filters == {"decision": "Deny", "reason": "Category", "device": "phone"}

    @pytest.mark.parametrize("expression", ["decision", "colour=red", "=Deny"])
    def test_parse_rejects_bad_filters(self, expression):
        # Act & Assert
        with pytest.raises(ValidationException) as exc_info:
            parse_audit_filters([expression])
        assert exc_info.value.error_code == "AUDIT_FILTER_INVALID"
