"""
Named end-of-run checks a scenario can request.

Each check receives the finished run and the assertion's params and returns a
pass/fail outcome with a short detail string.
"""

from collections.abc import Callable
from dataclasses import dataclass, field

from app.models.analytics import FaReport
from app.models.audit import AuditKind
from app.models.egress import NETWORK_CHANNELS, Channel
from app.models.package import CddViolation
from app.models.report import AssertionOutcome
from app.repositories.audit_repository import AuditRepository
from app.schemas.scenario_schemas import AssertionSpec
from app.services.fleet.device_runtime import SimulatedDevice

_NETWORK_CHANNEL_NAMES = frozenset(channel.value for channel in NETWORK_CHANNELS)


@dataclass
class RunOutcome:
    """Everything the checks may inspect after a run."""

    audit: AuditRepository
    devices: list[SimulatedDevice]
    fa_reports: dict[str, FaReport] = field(default_factory=dict)
    fa_oracles: dict[str, list[int]] = field(default_factory=dict)
    violations: list[CddViolation] = field(default_factory=list)

    @property
    def bytes_sent(self) -> int:
        """Bytes every transport actually moved outward."""
        fa = sum(report.uplink_bytes for report in self.fa_reports.values())
        devices = sum(d.egress_bytes + d.pir_bytes + d.delegated.released_bytes for d in self.devices)
        return fa + devices

    @property
    def bytes_received(self) -> int:
        return sum(d.download_bytes for d in self.devices)


AssertionCheck = Callable[[RunOutcome, dict], AssertionOutcome]


def no_raw_egress(outcome: RunOutcome, params: dict) -> AssertionOutcome:
    leaks = [
        event
        for event in outcome.audit.get_all()
        if event.allowed and event.category == "Raw" and event.channel in _NETWORK_CHANNEL_NAMES
    ]
    return AssertionOutcome(name="no_raw_egress", passed=not leaks, detail=f"{len(leaks)} raw network allows")


def byte_accounting(outcome: RunOutcome, params: dict) -> AssertionOutcome:
    events = outcome.audit.get_all()
    audited_out = sum(event.bytes_out for event in events if event.allowed)
    audited_in = sum(event.bytes_in for event in events if event.allowed and event.kind == AuditKind.DOWNLOAD)
    denied_bytes = sum(event.bytes_out + event.bytes_in for event in events if not event.allowed)
    passed = audited_out == outcome.bytes_sent and audited_in == outcome.bytes_received and denied_bytes == 0
    detail = (
        f"out audit={audited_out} transport={outcome.bytes_sent}; "
        f"in audit={audited_in} transport={outcome.bytes_received}"
    )
    return AssertionOutcome(name="byte_accounting", passed=passed, detail=detail)


def screen_attention_silent(outcome: RunOutcome, params: dict) -> AssertionOutcome:
    events = [event for event in outcome.audit.get_all() if event.feature == "screen_attention"]
    return AssertionOutcome(
        name="screen_attention_silent", passed=not events, detail=f"{len(events)} boundary events from the feature"
    )


def delegated_counts_only(outcome: RunOutcome, params: dict) -> AssertionOutcome:
    non_counts = [
        value for d in outcome.devices for _, value in d.delegated.observations if not isinstance(value, int)
    ]
    unauthorized = [
        event
        for event in outcome.audit.get_all()
        if event.allowed and event.channel == Channel.FRAMEWORK_SURFACE.value and not event.user_action
    ]
    passed = not non_counts and not unauthorized
    detail = f"{len(non_counts)} non-count observations, {len(unauthorized)} surface releases without a tap"
    return AssertionOutcome(name="delegated_counts_only", passed=passed, detail=detail)


def no_flag_secure_candidates(outcome: RunOutcome, params: dict) -> AssertionOutcome:
    tainted = [locus for d in outcome.devices for locus in d.candidate_loci if locus in d.flag_secure_loci]
    return AssertionOutcome(
        name="no_flag_secure_candidates", passed=not tainted, detail=f"{len(tainted)} candidates from secure windows"
    )


def fa_matches_plaintext(outcome: RunOutcome, params: dict) -> AssertionOutcome:
    mismatched = [
        task_id
        for task_id, report in outcome.fa_reports.items()
        if report.aborted is None and report.aggregate != outcome.fa_oracles.get(task_id)
    ]
    completed = sum(1 for report in outcome.fa_reports.values() if report.aborted is None)
    return AssertionOutcome(
        name="fa_matches_plaintext",
        passed=not mismatched,
        detail=f"{completed} tasks checked, mismatched: {sorted(mismatched)}",
    )


def deny_count(outcome: RunOutcome, params: dict) -> AssertionOutcome:
    reason, expected = params.get("reason"), params.get("expected")
    if reason is None or expected is None:
        return AssertionOutcome(name="deny_count", passed=False, detail="params 'reason' and 'expected' required")
    actual = len(outcome.audit.query({"decision": "Deny", "reason": str(reason)}))
    return AssertionOutcome(
        name="deny_count", passed=actual == expected, detail=f"{reason}: expected {expected}, got {actual}"
    )


def fa_aggregate(outcome: RunOutcome, params: dict) -> AssertionOutcome:
    task_id, expected = params.get("task_id"), params.get("expected")
    report = outcome.fa_reports.get(str(task_id))
    if report is None:
        return AssertionOutcome(name="fa_aggregate", passed=False, detail=f"task '{task_id}' did not run")
    passed = report.aborted is None and report.aggregate == expected
    return AssertionOutcome(
        name="fa_aggregate", passed=passed, detail=f"{task_id}: expected {expected}, got {report.aggregate}"
    )


def cdd_clean(outcome: RunOutcome, params: dict) -> AssertionOutcome:
    return AssertionOutcome(
        name="cdd_clean", passed=not outcome.violations, detail=f"{len(outcome.violations)} violations"
    )


def _per_device(name: str, attribute: str) -> AssertionCheck:
    def check(outcome: RunOutcome, params: dict) -> AssertionOutcome:
        device_name, expected = params.get("device"), params.get("expected")
        device = next((d for d in outcome.devices if d.name == device_name), None)
        if device is None:
            return AssertionOutcome(name=name, passed=False, detail=f"unknown device '{device_name}'")
        actual = getattr(device, attribute)
        return AssertionOutcome(
            name=name, passed=actual == expected, detail=f"{device_name}: expected {expected}, got {actual}"
        )

    return check


ASSERTIONS: dict[str, AssertionCheck] = {
    "no_raw_egress": no_raw_egress,
    "byte_accounting": byte_accounting,
    "screen_attention_silent": screen_attention_silent,
    "delegated_counts_only": delegated_counts_only,
    "no_flag_secure_candidates": no_flag_secure_candidates,
    "fa_matches_plaintext": fa_matches_plaintext,
    "deny_count": deny_count,
    "fa_aggregate": fa_aggregate,
    "cdd_clean": cdd_clean,
    "caption_lines": _per_device("caption_lines", "captions"),
    "dim_outcomes": _per_device("dim_outcomes", "dim_decisions"),
    "now_playing_matches": _per_device("now_playing_matches", "songs"),
}


def evaluate(assertions: list[AssertionSpec], outcome: RunOutcome) -> list[AssertionOutcome]:
    return [ASSERTIONS[spec.name](outcome, spec.params) for spec in assertions]
