from abc import ABC, abstractmethod
from typing import Generic, TypeVar

K = TypeVar("K")
T = TypeVar("T")


class BaseRepository(ABC, Generic[K, T]):
    """Abstract base repository over an in-memory keyed store (simulated device state)."""

    def __init__(self):
        """Initialize an empty store. Insertion order is preserved."""
        self._items: dict[K, T] = {}

    @abstractmethod
    def key_of(self, entity: T) -> K:
        """
        Key under which an entity is stored.
        :param entity: Entity
        :return: Store key
        """
        pass

    def get_by_id(self, id: K) -> T | None:
        """
        Get entity by key.
        :param id: Entity key
        :return: Entity or None if not found
        """
        return self._items.get(id)

    def get_all(self) -> list[T]:
        """Get all entities in insertion order."""
        return list(self._items.values())

    def create(self, entity: T) -> T:
        """
        Store an entity, replacing any entity with the same key.

        Default implementation; override for custom checks.

        :param entity: Entity to store
        :return: Stored entity
        """
        self._items[self.key_of(entity)] = entity
        return entity

    def delete(self, id: K) -> bool:
        """
        Delete entity by key.
        :param id: Entity key
        :return: True if deleted, False if not found
        """
        return self._items.pop(id, None) is not None

    def exists(self, id: K) -> bool:
        """Check if an entity exists by key."""
        return id in self._items

    def count(self) -> int:
        return len(self._items)
