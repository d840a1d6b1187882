"""
Speech recognizer interface.

Recognizers run inside the sandbox on stored audio payloads; the simulator
ships a deterministic label-echo implementation.
"""

from abc import ABC, abstractmethod


class ISpeechRecognizer(ABC):
    """Abstract interface for on-device speech recognition."""

    @abstractmethod
    def recognize(self, payload: bytes) -> str | None:
        """
        Recognize one stored audio frame.

        :param payload: Stored audio record payload
        :return: Recognized text, or None if the frame carries no speech
        """
        pass
