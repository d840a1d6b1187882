from app.interfaces.speech_recognizer import ISpeechRecognizer
from app.services.sources.ingestion_service import decode_audio_payload


class LabelEchoRecognizer(ISpeechRecognizer):
    """Returns the label the frame was captured with."""

    def recognize(self, payload: bytes) -> str | None:
        try:
            label, _ = decode_audio_payload(payload)
        except (ValueError, AttributeError):
            return None
        return label or None
