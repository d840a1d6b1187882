"""
Unit tests for scenario validation.

Every rejected document must name the JSON pointer of the offending value.
"""

import json

import pytest

from app.core.exceptions import ScenarioValidationException
from app.services.fleet.scenario_loader import json_pointer, load_scenario, parse_scenario
from tests.fixtures import ScenarioFactory

EGRESS = {
    "type": "egress",
    "at_ms": 0,
    "requester": "com.google.android.as",
    "category": "Derived",
    "source": "AppLaunches",
    "channel": "FederatedCompute",
    "policy_id": "fa_histogram",
}
FA_TASK = {"task_id": "app-usage", "policy_id": "fa_histogram", "buckets": ["com.example.maps"]}


def _pointer(document) -> str:
    with pytest.raises(ScenarioValidationException) as exc_info:
        parse_scenario(json.dumps(document))
    assert exc_info.value.error_code == "SCENARIO_INVALID"
    return exc_info.value.pointer


@pytest.mark.unit
class TestParseScenario:
    def test_minimal_document(self):
        # Act
        loaded = parse_scenario(json.dumps(ScenarioFactory.build()))

        # Assert
        assert loaded.device_names == ["phone"]
        assert [m.package for m in loaded.manifests[0]] == ["com.google.android.as", "com.google.android.as.oss"]
        assert "fa_histogram" in loaded.policies
        assert loaded.rules[0]

    def test_unnamed_devices_numbered(self):
        # Act
        loaded = parse_scenario(json.dumps(ScenarioFactory.build(devices=[{}, {"name": "b"}, {}])))

        # Assert
        assert loaded.device_names == ["device-01", "b", "device-03"]

    def test_inline_policies_merged(self):
        # Arrange
        document = ScenarioFactory.build(server={"policies": [{"policy_id": "custom", "k": 2}]})

        # Act & Assert
        assert parse_scenario(json.dumps(document)).policies["custom"].k == 2

    def test_shipped_scenarios_load(self, data_dir):
        # Act
        loaded = [load_scenario(path) for path in sorted((data_dir / "scenarios").glob("*.json"))]

        # Assert
        assert len(loaded) == 6


@pytest.mark.unit
class TestScenarioErrors:
    """Tests for the JSON pointer attached to each rejection."""

    def test_invalid_json(self):
        with pytest.raises(ScenarioValidationException) as exc_info:
            parse_scenario("{not json")
        assert exc_info.value.pointer == ""

    def test_no_devices(self):
        assert _pointer(ScenarioFactory.build(devices=[])) == "/devices"

    def test_missing_event_field(self):
        assert _pointer(ScenarioFactory.with_events({"type": "tap", "at_ms": 0})) == "/devices/0/events/0/index"

    def test_unexpected_event_field(self):
        # Arrange
        document = ScenarioFactory.with_events({"type": "observe", "at_ms": 0, "colour": "red"})

        # Act & Assert
        assert _pointer(document) == "/devices/0/events/0/colour"

    def test_unknown_event_type(self):
        assert _pointer(ScenarioFactory.with_events({"type": "teleport", "at_ms": 0})).startswith(
            "/devices/0/events/0"
        )

    def test_duplicate_device_names(self):
        assert _pointer(ScenarioFactory.build(devices=[{"name": "a"}, {"name": "a"}])) == "/devices/1/name"

    def test_decreasing_timestamps(self):
        # Arrange
        document = ScenarioFactory.with_events({"type": "observe", "at_ms": 10}, {"type": "observe", "at_ms": 5})

        # Act & Assert
        assert _pointer(document) == "/devices/0/events/1/at_ms"

    def test_unknown_policy(self):
        assert _pointer(ScenarioFactory.with_events({**EGRESS, "policy_id": "nope"})) == (
            "/devices/0/events/0/policy_id"
        )

    def test_now_playing_needs_pir(self):
        # Arrange
        document = ScenarioFactory.with_events({"type": "now_playing", "at_ms": 0, "label": "song-001"})

        # Act & Assert
        assert _pointer(document) == "/devices/0/events/0/type"

    def test_missing_manifest(self):
        # Arrange
        document = ScenarioFactory.build(defaults={"packages": ["manifests/nope.json"]})

        # Act & Assert
        assert _pointer(document) == "/defaults/packages/0"

    def test_duplicate_policy(self):
        assert _pointer(ScenarioFactory.build(server={"policies": [{"policy_id": "fa_histogram"}]})) == (
            "/server/policies"
        )

    def test_unknown_task_policy(self):
        # Arrange
        document = ScenarioFactory.build(server={"fa_tasks": [{**FA_TASK, "policy_id": "nope"}]})

        # Act & Assert
        assert _pointer(document) == "/server/fa_tasks/0/policy_id"

    def test_dropout_for_unknown_device(self):
        # Arrange
        document = ScenarioFactory.build(
            server={"fa_tasks": [FA_TASK]},
            dropout_schedule=[{"device": "tablet", "task_id": "app-usage", "round": "MaskedInput"}],
        )

        # Act & Assert
        assert _pointer(document) == "/dropout_schedule/0/device"

    def test_dropout_for_unknown_task(self):
        # Arrange
        document = ScenarioFactory.build(
            server={"fa_tasks": [FA_TASK]},
            dropout_schedule=[{"device": "phone", "task_id": "other", "round": "MaskedInput"}],
        )

        # Act & Assert
        assert _pointer(document) == "/dropout_schedule/0/task_id"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioValidationException) as exc_info:
            load_scenario(tmp_path / "absent.json")
        assert exc_info.value.pointer == ""


@pytest.mark.unit
class TestJsonPointer:
    def test_escapes_special_characters(self):
        assert json_pointer({"a/b": {"c~d": 1}}, ("a/b", "c~d")) == "/a~1b/c~0d"

    def test_root(self):
        assert json_pointer({}, ()) == ""
