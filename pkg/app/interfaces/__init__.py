"""
Service interfaces for dependency injection.

This module defines abstract interfaces for the cryptographic primitives and
the on-device models, enabling clean dependency injection and easy testing.
"""

from app.interfaces.entity_extractor import IEntityExtractor
from app.interfaces.face_detector import IFaceDetector
from app.interfaces.homomorphic_scheme import IHomomorphicScheme
from app.interfaces.key_agreement import IKeyAgreement
from app.interfaces.speech_recognizer import ISpeechRecognizer

__all__ = [
    "IEntityExtractor",
    "IFaceDetector",
    "IHomomorphicScheme",
    "IKeyAgreement",
    "ISpeechRecognizer",
]
