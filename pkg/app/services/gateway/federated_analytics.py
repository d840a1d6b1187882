"""
Federated analytics over secure aggregation.

Each participating device turns its live records into a presence vector over
the task's bucket apps, restricted to apps popular enough across the fleet.
Vectors only ever leave a device masked, through the gateway's
FederatedCompute channel.
"""

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np
import structlog

from app.core.config import settings
from app.core.exceptions import InvariantBreachException, SecAggAbortException
from app.models.analytics import FaReport, FaTask
from app.models.data import DataCategory, DataDescriptor
from app.models.egress import Channel, EgressRequest
from app.models.record import ControlState
from app.services.gateway.gateway_service import GatewayService
from app.services.sandbox.ephemeral_store import EphemeralStoreService
from app.services.secagg.messages import SecAggConfig, SecAggMessage, SecAggRound, decode_vector
from app.services.secagg.session import SecAggSession, make_agreement
from app.services.sources.ingestion_service import control_gate

logger = structlog.get_logger(__name__)


@dataclass
class FaParticipant:
    """One device's view for a task: its store, its controls and its gateway."""

    name: str
    store: EphemeralStoreService
    controls: ControlState
    gateway: GatewayService


def bucket_presence(task: FaTask, store: EphemeralStoreService) -> set[str]:
    """Bucket apps with at least one live record of the task's source inside the window."""
    now = store.clock.now
    oldest = None if task.window_ms is None else now - task.window_ms
    buckets = set(task.buckets)
    return {
        record.descriptor.origin_package
        for record in store.live_records(task.source)
        if record.descriptor.origin_package in buckets and (oldest is None or record.created_at >= oldest)
    }


def local_vector(task: FaTask, store: EphemeralStoreService, popular: set[str]) -> np.ndarray:
    present = bucket_presence(task, store)
    return np.array([1 if b in popular and b in present else 0 for b in task.buckets], dtype=np.int64)


class FederatedAnalyticsService:
    """Runs FA tasks for a fleet of participants."""

    def __init__(self, root_seed: int, threshold_ratio: float | None = None, key_agreement: str | None = None):
        self.root_seed = root_seed
        self.threshold_ratio = threshold_ratio or settings.secagg_threshold_ratio
        self.key_agreement = key_agreement

    def partition(
        self, task: FaTask, participants: Sequence[FaParticipant]
    ) -> tuple[list[FaParticipant], dict[str, str]]:
        """Split into included devices and excluded ones with the control that excluded them."""
        included: list[FaParticipant] = []
        excluded: dict[str, str] = {}
        for participant in participants:
            reason = control_gate(task.source, participant.controls)
            if reason is None:
                included.append(participant)
            else:
                excluded[participant.name] = reason.value
        return included, excluded

    def popular_buckets(self, task: FaTask, included: Sequence[FaParticipant]) -> set[str]:
        """Buckets present on at least popularity_threshold included devices (fleet ground truth)."""
        counts = {bucket: 0 for bucket in task.buckets}
        for participant in included:
            for bucket in bucket_presence(task, participant.store):
                counts[bucket] += 1
        return {bucket for bucket, count in counts.items() if count >= task.popularity_threshold}

    def plaintext_oracle(
        self, task: FaTask, participants: Sequence[FaParticipant], survivors: Sequence[str]
    ) -> list[int]:
        """Plaintext column sums over the survivors, for checking the aggregate."""
        included, _ = self.partition(task, participants)
        popular = self.popular_buckets(task, included)
        names = set(survivors)
        total = np.zeros(len(task.buckets), dtype=np.int64)
        for participant in included:
            if participant.name in names:
                total += local_vector(task, participant.store, popular)
        return [int(v) for v in total % settings.secagg_modulus]

    def run_fa_task(
        self,
        task: FaTask,
        participants: Sequence[FaParticipant],
        dropouts: Mapping[str, SecAggRound] | None = None,
        propagate_abort: bool = True,
    ) -> FaReport:
        """
        Run one FA task.

        :param task: Task definition
        :param participants: Every device of the fleet, in index order
        :param dropouts: Device name -> round in which it goes silent
        :param propagate_abort: Re-raise a secure-aggregation abort instead of reporting it
        :return: Aggregate and session summary
        :raises SecAggAbortException: If too few devices survive a round and propagate_abort is set
        """
        included, excluded = self.partition(task, participants)
        popular = self.popular_buckets(task, included)
        d = len(task.buckets)
        base = {
            "task_id": task.task_id,
            "buckets": list(task.buckets),
            "popular_buckets": sorted(popular),
            "participants": [p.name for p in included],
            "excluded": excluded,
        }
        if not included:
            logger.warning("fa_task_no_participants", task_id=task.task_id)
            return FaReport(aggregate=[0] * d, aborted="NoParticipants", **base)

        n = len(included)
        session_id = f"fa:{task.task_id}"
        config = SecAggConfig(n=n, t=max(1, math.ceil(self.threshold_ratio * n)), d=d, session_id=session_id)
        vectors = [local_vector(task, p.store, popular) for p in included]
        by_index = dict(enumerate(included, start=1))
        schedule = dropouts or {}
        drop_plan = {index: schedule[p.name] for index, p in by_index.items() if p.name in schedule}

        def uplink(index: int, round_tag: SecAggRound, data: bytes) -> bool:
            participant = by_index[index]
            if round_tag == SecAggRound.MASKED_INPUT:
                masked = decode_vector(SecAggMessage.from_bytes(data).body[0])
                if np.array_equal(masked, vectors[index - 1]):
                    raise InvariantBreachException("fa-masked-upload", f"{participant.name} sent its vector unmasked")
            request = EgressRequest(
                requester=task.requester,
                descriptor=DataDescriptor.for_source(DataCategory.DERIVED, task.source, task.requester),
                channel=Channel.FEDERATED_COMPUTE,
                payload=data,
                policy_id=task.policy_id,
                feature=session_id,
            )
            return participant.gateway.gate(request).allowed

        session = SecAggSession(
            config,
            vectors,
            self.root_seed,
            dropouts=drop_plan,
            agreement=make_agreement(self.key_agreement, self.root_seed, session_id),
            uplink=uplink,
        )
        try:
            result = session.run()
        except SecAggAbortException as e:
            if propagate_abort:
                raise
            logger.warning("fa_task_aborted", task_id=task.task_id, detail=e.message)
            return FaReport(
                aggregate=[0] * d,
                aborted=e.message,
                survivors_per_round={r.label: len(s) for r, s in session.server.survivors.items()},
                uplink_bytes=session.uplink_bytes,
                **base,
            )

        logger.info("fa_task_completed", task_id=task.task_id, participants=n, survivors=len(result.survivors))
        return FaReport(
            aggregate=result.total,
            survivors=[by_index[i].name for i in result.survivors],
            survivors_per_round=result.survivors_per_round,
            transcript_digest=result.transcript_digest,
            uplink_bytes=result.uplink_bytes,
            **base,
        )
