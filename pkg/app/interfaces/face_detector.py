from abc import ABC, abstractmethod


class IFaceDetector(ABC):
    """Abstract interface for face presence detection on stored camera frames."""

    @abstractmethod
    def detect(self, payload: bytes) -> bool:
        pass
