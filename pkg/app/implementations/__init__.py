"""
Concrete implementations of service interfaces.

This module provides the key agreements, the homomorphic scheme used by PIR
and the deterministic on-device models that feature services are wired with.
"""

from .dealer_agreement import DealerKeyAgreement
from .flag_face_detector import FlagFaceDetector
from .label_echo_recognizer import LabelEchoRecognizer
from .paillier_scheme import PaillierScheme
from .tagged_entity_extractor import TaggedEntityExtractor
from .x25519_agreement import X25519KeyAgreement

__all__ = [
    "DealerKeyAgreement",
    "FlagFaceDetector",
    "LabelEchoRecognizer",
    "PaillierScheme",
    "TaggedEntityExtractor",
    "X25519KeyAgreement",
]
