"""
Deterministic discrete-event fleet simulator.

Events are ordered by (time, device events before server events, device
index, position). All randomness derives from the scenario seed; nothing
reads the wall clock.
"""

import hashlib
import heapq
from collections import Counter
from typing import Any

import structlog

from app.core.config import settings
from app.core.utils import derive_rng
from app.models.analytics import FaReport, FaTask
from app.models.data import DataCategory
from app.models.egress import DownloadEntry, DownloadManifest, PopulationHistogram
from app.models.package import CddViolation
from app.models.report import DeviceSummary, RunReport
from app.repositories.audit_repository import AuditRepository
from app.schemas.scenario_schemas import EgressSpec, Scenario
from app.services.fleet.assertions import RunOutcome, evaluate
from app.services.fleet.device_runtime import SimulatedDevice, build_pir_server
from app.services.fleet.scenario_loader import LoadedScenario
from app.services.gateway.download_transport import ModelServer
from app.services.gateway.federated_analytics import FaParticipant, FederatedAnalyticsService
from app.services.policy.cdd_verifier import CddVerifier
from app.services.sandbox.clock import SimClock
from app.services.secagg.messages import SecAggRound

logger = structlog.get_logger(__name__)

_DEVICE_EVENT, _SERVER_EVENT = 0, 1
_ROUNDS_BY_LABEL = {r.label: r for r in SecAggRound}


def population_histogram(scenario: Scenario) -> PopulationHistogram:
    """Ground-truth cohort counts: how many devices emit each Metadata value."""
    observations: dict[str, set[bytes]] = {}
    for name, device in zip(scenario.device_names(), scenario.devices, strict=True):
        observations[name] = {
            event.payload.encode("utf-8")
            for event in device.events
            if isinstance(event, EgressSpec) and event.category == DataCategory.METADATA
        }
    return PopulationHistogram.from_observations(observations)


def model_hosting(scenario: Scenario) -> tuple[DownloadManifest, ModelServer]:
    entries, blobs, tamper, flaky = [], {}, {}, {}
    for model in scenario.server.models:
        content = model.content.encode("utf-8")
        blobs[model.uri] = content
        if model.allowlisted:
            entries.append(DownloadEntry(uri=model.uri, sha256=hashlib.sha256(content).hexdigest()))
        if model.tamper_bit is not None:
            tamper[model.uri] = model.tamper_bit
        if model.transient_failures:
            flaky[model.uri] = model.transient_failures
    return DownloadManifest(entries=entries), ModelServer(blobs, tamper, flaky)


class FleetSimulator:
    """Runs one loaded scenario to a report."""

    def __init__(self, loaded: LoadedScenario, seed: int | None = None):
        self.loaded = loaded
        self.scenario = loaded.scenario
        self.seed = self.scenario.seed if seed is None else seed
        self.clock = SimClock()
        self.audit = AuditRepository()
        self.fa_reports: dict[str, FaReport] = {}
        self.fa_oracles: dict[str, list[int]] = {}

        histogram = population_histogram(self.scenario)
        download_manifest, model_server = model_hosting(self.scenario)
        pir_server = build_pir_server(self.scenario.server.pir) if self.scenario.server.pir else None
        defaults = self.scenario.defaults

        self.devices: list[SimulatedDevice] = []
        for index, (name, device) in enumerate(zip(self.scenario.device_names(), self.scenario.devices), start=1):
            controls = (device.controls or defaults.controls).to_state()
            self.devices.append(
                SimulatedDevice(
                    index=index,
                    name=name,
                    manifests=loaded.manifests[index - 1],
                    rules=loaded.rules[index - 1],
                    controls=controls,
                    features=device.features or defaults.features,
                    clock=self.clock,
                    audit_repo=self.audit,
                    policies=loaded.policies,
                    histogram=histogram,
                    download_manifest=download_manifest,
                    model_server=model_server,
                    pir_server=pir_server,
                    pir_rng=derive_rng(self.seed, "pir", name),
                )
            )
        self.analytics = FederatedAnalyticsService(self.seed)

    def _schedule(self) -> list[tuple[int, int, int, int, Any]]:
        queue: list[tuple[int, int, int, int, Any]] = []
        for device_index, device in enumerate(self.scenario.devices):
            for position, event in enumerate(device.events):
                queue.append((event.at_ms, _DEVICE_EVENT, device_index, position, event))
        for position, task in enumerate(self.scenario.server.fa_tasks):
            queue.append((task.at_ms, _SERVER_EVENT, 0, position, task))
        heapq.heapify(queue)
        return queue

    def _run_fa_task(self, task: FaTask) -> None:
        participants = [
            FaParticipant(name=device.name, store=device.store, controls=device.controls, gateway=device.gateway)
            for device in self.devices
        ]
        dropouts = {
            entry.device: _ROUNDS_BY_LABEL[entry.round]
            for entry in self.scenario.dropout_schedule
            if entry.task_id == task.task_id
        }
        for device in self.devices:
            device.store.purge_expired()
        report = self.analytics.run_fa_task(task, participants, dropouts, propagate_abort=False)
        self.fa_reports[task.task_id] = report
        if report.aborted is None:
            self.fa_oracles[task.task_id] = self.analytics.plaintext_oracle(task, participants, report.survivors)

    def _cdd_findings(self) -> tuple[list[CddViolation], list[CddViolation]]:
        verifier = CddVerifier()
        violations: dict[tuple[str, str, str], CddViolation] = {}
        advisories: dict[tuple[str, str, str], CddViolation] = {}
        for device in self.devices:
            for manifest in device.packages.get_all():
                for finding in verifier.verify(manifest, device.rules):
                    violations[(finding.package, finding.rule_id, finding.detail)] = finding
                for finding in verifier.advisories(manifest, device.rules):
                    advisories[(finding.package, finding.rule_id, finding.detail)] = finding
        return [violations[k] for k in sorted(violations)], [advisories[k] for k in sorted(advisories)]

    def run(self) -> RunReport:
        """
        Advance the clock through every event and evaluate the assertions.

        :return: Deterministic report
        :raises InvariantBreachException: If an internal invariant fails; the run stops there
        """
        queue = self._schedule()
        while queue:
            at_ms, kind, device_index, _, event = heapq.heappop(queue)
            self.clock.advance_to(at_ms)
            if kind == _DEVICE_EVENT:
                self.devices[device_index].handle(event)
            else:
                self._run_fa_task(event)

        violations, advisories = self._cdd_findings()
        outcome = RunOutcome(
            audit=self.audit,
            devices=self.devices,
            fa_reports=self.fa_reports,
            fa_oracles=self.fa_oracles,
            violations=violations,
        )
        outcomes = evaluate(list(self.scenario.assertions), outcome)
        events = self.audit.get_all()
        deny_counts = Counter(event.reason for event in events if not event.allowed and event.reason)

        report = RunReport(
            scenario=self.scenario.name,
            seed=self.seed,
            tool_version=settings.tool_version,
            config_hash=settings.config_hash,
            passed=all(o.passed for o in outcomes),
            assertions=outcomes,
            audit_digest=self.audit.digest(),
            audit_events=len(events),
            audit_log=self.audit.to_jsonl(),
            deny_counts=dict(sorted(deny_counts.items())),
            fa_aggregates=self.fa_reports,
            pir_transcripts=[exchange for device in self.devices for exchange in device.pir_exchanges],
            violations=violations,
            advisories=advisories,
            devices=[self._summary(device) for device in self.devices],
            bytes_out=outcome.bytes_sent,
            bytes_in=outcome.bytes_received,
        )
        logger.info(
            "scenario_run_completed",
            scenario=self.scenario.name,
            passed=report.passed,
            audit_events=report.audit_events,
        )
        return report

    @staticmethod
    def _summary(device: SimulatedDevice) -> DeviceSummary:
        return DeviceSummary(
            name=device.name,
            live_records=len(device.store.live_records()),
            ingest_drops=dict(sorted(device.drops.items())),
            candidates=device.candidates,
            observations=[count for _, count in device.delegated.observations],
            released=device.released,
            captions=device.captions,
            dim_decisions=device.dim_decisions,
            songs=device.songs,
            appsearch_hits=device.appsearch_hits,
        )


def run_scenario(loaded: LoadedScenario, seed: int | None = None) -> RunReport:
    return FleetSimulator(loaded, seed).run()
