from typing import Any

import structlog

from app.core.config import settings
from app.models.ipc import IsolatedProcessSpec
from app.services.sandbox.process_manager import ProcessHandle, ProcessManager

logger = structlog.get_logger(__name__)


class FeatureHost:
    """
    Ephemeral isolated process a feature runs in.

    Spawned on first use; once its lifetime elapses the platform replaces it
    with a successor whose private state is empty.
    """

    def __init__(self, processes: ProcessManager, package: str, lifetime_ms: int | None = None):
        self.processes = processes
        self.package = package
        self.lifetime_ms = lifetime_ms or settings.process_lifetime_ms
        self._handle: ProcessHandle | None = None

    def handle(self) -> ProcessHandle:
        """Live handle, spawning or following a rotation as needed."""
        if self._handle is None:
            spec = IsolatedProcessSpec(owner=self.package, ephemeral=True, max_lifetime=self.lifetime_ms)
            self._handle = self.processes.spawn_isolated(spec)
        else:
            current = self.processes.current(self._handle)
            if current != self._handle:
                logger.debug("feature_process_rotated", old=self._handle.handle_id, new=current.handle_id)
            self._handle = current
        return self._handle

    def read(self, key: str, default: Any = None) -> Any:
        return self.processes.read_state(self.handle(), key, default)

    def write(self, key: str, value: Any) -> None:
        self.processes.write_state(self.handle(), key, value)
