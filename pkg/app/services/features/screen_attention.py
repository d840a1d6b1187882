"""
Screen Attention: keep the screen on while someone is looking at it.

The service holds no gateway, transport or broker reference: it has no way to
reach the network.
"""

import json
from collections.abc import Sequence

import structlog

from app.core.config import settings
from app.implementations.flag_face_detector import FlagFaceDetector
from app.interfaces.face_detector import IFaceDetector
from app.models.data import DataSource
from app.models.features import DimDecision, DimOutcome
from app.models.record import ControlState
from app.models.sources import CameraFrame
from app.services.features.feature_host import FeatureHost
from app.services.sources.ingestion_service import IngestionService

logger = structlog.get_logger(__name__)


class ScreenAttentionService:
    def __init__(
        self,
        ingestion: IngestionService,
        detector: IFaceDetector | None = None,
        host: FeatureHost | None = None,
        window_ms: int | None = None,
    ):
        self.ingestion = ingestion
        self.detector = detector or FlagFaceDetector()
        self.host = host
        self.window_ms = settings.attention_window_ms if window_ms is None else window_ms

    def decide(
        self,
        scheduled_dim_time: int,
        controls: ControlState,
        opted_in: bool,
        frames: Sequence[CameraFrame] = (),
    ) -> DimDecision:
        """
        Decide whether to dim at the scheduled time.

        :param scheduled_dim_time: When the screen would dim
        :param controls: Current controls (camera toggle, permissions)
        :param opted_in: Explicit user opt-in; without it the feature is inert
        :param frames: Frames delivered with this decision, ingested before deciding
        :return: Postpone iff the latest admitted frame inside the window shows a face
        """
        if not opted_in:
            return DimDecision(outcome=DimOutcome.DIM, at=scheduled_dim_time)
        if self.host is not None:
            self.host.handle()

        for frame in frames:
            self.ingestion.capture_camera(frame, controls)

        oldest = scheduled_dim_time - self.window_ms
        latest: tuple[int, bytes] | None = None
        for record in self.ingestion.store.live_records(DataSource.CAMERA):
            taken_at = json.loads(record.payload).get("timestamp", record.created_at)
            if oldest <= taken_at <= scheduled_dim_time and (latest is None or taken_at >= latest[0]):
                latest = (taken_at, record.payload)

        outcome = DimOutcome.POSTPONE if latest is not None and self.detector.detect(latest[1]) else DimOutcome.DIM
        logger.debug("screen_attention_decided", outcome=outcome.value, at=scheduled_dim_time)
        return DimDecision(outcome=outcome, at=scheduled_dim_time)
