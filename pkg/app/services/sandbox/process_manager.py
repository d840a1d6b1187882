from typing import Any

import structlog
from pydantic import BaseModel, ConfigDict

from app.core.exceptions import InvalidProcessHandleException, ValidationException
from app.models.ipc import IsolatedProcessSpec
from app.repositories.package_repository import IPackageRepository
from app.services.sandbox.clock import SimClock

logger = structlog.get_logger(__name__)


class ProcessHandle(BaseModel):
    """Opaque reference to one generation of an isolated process."""

    handle_id: str
    owner: str
    lineage: int
    generation: int
    spawned_at: int
    expires_at: int | None = None  # None for non-ephemeral processes

    model_config = ConfigDict(frozen=True)


class _Lineage:
    def __init__(self, spec: IsolatedProcessSpec, lineage: int, spawned_at: int):
        self.spec = spec
        self.lineage = lineage
        self.generation = 0
        self.handle = self._make_handle(spawned_at)
        self.state: dict[str, Any] = {}

    def _make_handle(self, spawned_at: int) -> ProcessHandle:
        expires_at = spawned_at + self.spec.max_lifetime if self.spec.ephemeral else None
        return ProcessHandle(
            handle_id=f"{self.spec.owner}#{self.lineage}.{self.generation}",
            owner=self.spec.owner,
            lineage=self.lineage,
            generation=self.generation,
            spawned_at=spawned_at,
            expires_at=expires_at,
        )

    def rotate(self) -> None:
        assert self.handle.expires_at is not None
        self.generation += 1
        self.handle = self._make_handle(self.handle.expires_at)
        self.state = {}


class ProcessManager:
    """
    Isolated-process lifecycle on one device.

    Ephemeral processes are replaced by a successor with empty state once
    created + max_lifetime is reached; the old handle is invalid from then on.
    """

    def __init__(self, packages: IPackageRepository, clock: SimClock):
        self.packages = packages
        self.clock = clock
        self._lineages: list[_Lineage] = []

    def spawn_isolated(self, spec: IsolatedProcessSpec) -> ProcessHandle:
        """
        Start an isolated process with empty private state.

        :param spec: Owner, ephemerality and lifetime
        :return: Handle of generation 0
        :raises UnknownPackageException: If the owner is not registered
        :raises ValidationException: If an ephemeral process has zero lifetime
        """
        self.packages.get_manifest(spec.owner)
        if spec.ephemeral and spec.max_lifetime == 0:
            raise ValidationException("ephemeral process needs max_lifetime > 0", error_code="DEGENERATE_LIFETIME")

        lineage = _Lineage(spec, len(self._lineages), self.clock.now)
        self._lineages.append(lineage)
        logger.debug("process_spawned", handle=lineage.handle.handle_id, ephemeral=spec.ephemeral)
        return lineage.handle

    def rotate_due(self) -> int:
        """
        Replace every ephemeral process whose lifetime has elapsed.
        :return: Number of rotations performed
        """
        now = self.clock.now
        rotations = 0
        for lineage in self._lineages:
            while lineage.handle.expires_at is not None and lineage.handle.expires_at <= now:
                old = lineage.handle.handle_id
                lineage.rotate()
                rotations += 1
                logger.debug("process_rotated", old=old, new=lineage.handle.handle_id)
        return rotations

    def is_valid(self, handle: ProcessHandle) -> bool:
        self.rotate_due()
        return self._lineage_of(handle).handle == handle

    def current(self, handle: ProcessHandle) -> ProcessHandle:
        """Live successor of a handle (the handle itself if still valid)."""
        self.rotate_due()
        return self._lineage_of(handle).handle

    def read_state(self, handle: ProcessHandle, key: str, default: Any = None) -> Any:
        return self._live(handle).state.get(key, default)

    def write_state(self, handle: ProcessHandle, key: str, value: Any) -> None:
        self._live(handle).state[key] = value

    def _lineage_of(self, handle: ProcessHandle) -> _Lineage:
        if handle.lineage >= len(self._lineages) or self._lineages[handle.lineage].spec.owner != handle.owner:
            raise InvalidProcessHandleException(handle.handle_id)
        return self._lineages[handle.lineage]

    def _live(self, handle: ProcessHandle) -> _Lineage:
        self.rotate_due()
        lineage = self._lineage_of(handle)
        if lineage.handle != handle:
            raise InvalidProcessHandleException(handle.handle_id)
        return lineage
