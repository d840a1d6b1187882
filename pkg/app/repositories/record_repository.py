from abc import abstractmethod

from app.models.record import EphemeralRecord
from app.repositories.base_repository import BaseRepository


class IRecordRepository(BaseRepository[str, EphemeralRecord]):
    """Abstract interface for the ephemeral record store."""

    @abstractmethod
    def next_id(self) -> str:
        """Allocate a fresh record id."""
        pass

    @abstractmethod
    def lineage(self, record_id: str) -> frozenset[str]:
        """Locus ids in the provenance chain of a record (itself included)."""
        pass

    @abstractmethod
    def get_by_lineage(self, locus_id: str) -> list[EphemeralRecord]:
        """Records whose provenance chain includes the locus id."""
        pass

    @abstractmethod
    def delete_many(self, record_ids: list[str]) -> int:
        """Delete records by id, returning how many existed."""
        pass


class RecordRepository(IRecordRepository):
    """
    In-memory record store with a provenance index.

    Lineage is captured when a record is stored, so a Derived record stays
    reachable from its locus even after its parents are purged.
    """

    def __init__(self):
        super().__init__()
        self._lineage: dict[str, frozenset[str]] = {}
        self._sequence = 0

    def key_of(self, entity: EphemeralRecord) -> str:
        return entity.id

    def next_id(self) -> str:
        self._sequence += 1
        return f"rec-{self._sequence:06d}"

    def create(self, entity: EphemeralRecord) -> EphemeralRecord:
        loci: set[str] = {entity.locus_id} if entity.locus_id is not None else set()
        for parent_id in entity.parent_ids:
            loci |= self._lineage.get(parent_id, frozenset())
        self._lineage[entity.id] = frozenset(loci)
        return super().create(entity)

    def delete(self, id: str) -> bool:
        self._lineage.pop(id, None)
        return super().delete(id)

    def lineage(self, record_id: str) -> frozenset[str]:
        return self._lineage.get(record_id, frozenset())

    def get_by_lineage(self, locus_id: str) -> list[EphemeralRecord]:
        return [record for record in self._items.values() if locus_id in self._lineage.get(record.id, frozenset())]

    def delete_many(self, record_ids: list[str]) -> int:
        return sum(1 for record_id in record_ids if self.delete(record_id))
