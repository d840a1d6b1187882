import json

from app.interfaces.face_detector import IFaceDetector


class FlagFaceDetector(IFaceDetector):
    """Reads the face_present flag stored with the frame."""

    def detect(self, payload: bytes) -> bool:
        try:
            return bool(json.loads(payload).get("face_present", False))
        except (ValueError, AttributeError):
            return False
