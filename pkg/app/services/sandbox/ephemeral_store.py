"""
TTL-bounded in-memory store for data held inside the sandbox.

Reads are boundary inclusive: a record is readable while now <= created_at + ttl.
"""

import structlog

from app.core.config import settings
from app.core.exceptions import InvalidIntervalException, RecordExpiredException, RecordNotFoundException
from app.models.data import DataCategory, DataDescriptor, DataSource
from app.models.record import EphemeralRecord
from app.repositories.record_repository import IRecordRepository, RecordRepository
from app.services.sandbox.clock import SimClock

logger = structlog.get_logger(__name__)


class EphemeralStoreService:
    """Service for record lifecycle: put, get, expiry, locus deletion and clear-data."""

    def __init__(self, clock: SimClock, record_repo: IRecordRepository | None = None, default_ttl: int | None = None):
        self.clock = clock
        self.record_repo = record_repo or RecordRepository()
        self.default_ttl = default_ttl or settings.default_ttl_ms

    def put(self, record: EphemeralRecord) -> str:
        """
        Store a fully built record.
        :param record: Record with a unique id and ttl > 0
        :return: Record id
        """
        self.record_repo.create(record)
        return record.id

    def put_raw(
        self,
        descriptor: DataDescriptor,
        payload: bytes,
        locus_id: str | None = None,
        ttl: int | None = None,
    ) -> str:
        """
        Store a datum produced by a framework data source, stamped with the current time.

        :param descriptor: Raw descriptor of the source
        :param payload: Bytes to hold
        :param locus_id: Locus of ScreenCapture / AppPushed content
        :param ttl: Lifetime in ms (defaults to the store default)
        :return: New record id
        """
        record = EphemeralRecord(
            id=self.record_repo.next_id(),
            descriptor=descriptor,
            payload=payload,
            locus_id=locus_id,
            created_at=self.clock.now,
            ttl=self.default_ttl if ttl is None else ttl,
        )
        return self.put(record)

    def derive(
        self,
        parent_ids: list[str],
        payload: bytes,
        ttl: int | None = None,
        category: DataCategory = DataCategory.DERIVED,
        origin_package: str | None = None,
    ) -> str:
        """
        Store the result of in-sandbox computation over live records.

        The new record inherits class and source from the first parent and
        records every parent for provenance.

        :param parent_ids: Input record ids (at least one, all live)
        :param payload: Computed bytes
        :param ttl: Lifetime in ms
        :param category: Derived or Metadata
        :param origin_package: Producing package (defaults to the first parent's origin)
        :return: New record id
        :raises RecordNotFoundException: If a parent does not exist
        :raises RecordExpiredException: If a parent has expired
        """
        if not parent_ids:
            raise ValueError("derive needs at least one parent")
        if category == DataCategory.RAW:
            raise ValueError("raw records come from data sources only")

        parents = [self.get_record(parent_id) for parent_id in parent_ids]
        first = parents[0].descriptor
        descriptor = first.model_copy(
            update={"category": category, "origin_package": origin_package or first.origin_package}
        )
        record = EphemeralRecord(
            id=self.record_repo.next_id(),
            descriptor=descriptor,
            payload=payload,
            created_at=self.clock.now,
            ttl=self.default_ttl if ttl is None else ttl,
            parent_ids=frozenset(parent_ids),
        )
        return self.put(record)

    def get_record(self, record_id: str) -> EphemeralRecord:
        """
        Get a live record.
        :raises RecordNotFoundException: Unknown id
        :raises RecordExpiredException: TTL elapsed
        """
        record = self.record_repo.get_by_id(record_id)
        if record is None:
            raise RecordNotFoundException(record_id)
        if not record.is_live(self.clock.now):
            raise RecordExpiredException(record_id)
        return record

    def get(self, record_id: str) -> bytes:
        """Payload of a live record."""
        return self.get_record(record_id).payload

    def live_records(self, source: DataSource | None = None) -> list[EphemeralRecord]:
        """Unexpired records in insertion order, optionally of one source."""
        now = self.clock.now
        return [
            record
            for record in self.record_repo.get_all()
            if record.is_live(now) and (source is None or record.descriptor.source == source)
        ]

    def purge_expired(self) -> int:
        """
        Remove every expired record.
        :return: Number of records removed
        """
        now = self.clock.now
        expired = [record.id for record in self.record_repo.get_all() if not record.is_live(now)]
        removed = self.record_repo.delete_many(expired)
        if removed:
            logger.debug("records_purged", count=removed, now=now)
        return removed

    def delete_by_locus(self, locus_id: str) -> int:
        """
        Delete every record whose provenance includes the locus id.

        :param locus_id: Locus of the source datum
        :return: Number of records removed (0 for an unknown locus)
        """
        cone = [record.id for record in self.record_repo.get_by_lineage(locus_id)]
        removed = self.record_repo.delete_many(cone)
        logger.info("locus_deleted", locus_id=locus_id, count=removed)
        return removed

    def clear_data(self, start: int | None = None, end: int | None = None) -> int:
        """
        Delete records created within [start, end]; both None means All.

        :param start: Inclusive lower bound (None = unbounded)
        :param end: Inclusive upper bound (None = unbounded)
        :return: Number of records removed
        :raises InvalidIntervalException: If start > end
        """
        if start is not None and end is not None and start > end:
            raise InvalidIntervalException(start, end)

        lower = start if start is not None else 0
        doomed = [
            record.id
            for record in self.record_repo.get_all()
            if record.created_at >= lower and (end is None or record.created_at <= end)
        ]
        removed = self.record_repo.delete_many(doomed)
        logger.info("data_cleared", start=start, end=end, count=removed)
        return removed

    def count(self) -> int:
        """Stored records, expired ones included until purged."""
        return self.record_repo.count()
