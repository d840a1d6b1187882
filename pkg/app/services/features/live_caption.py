from collections.abc import Sequence

import structlog

from app.core.constants import ASI_PACKAGE
from app.implementations.label_echo_recognizer import LabelEchoRecognizer
from app.interfaces.speech_recognizer import ISpeechRecognizer
from app.models.features import CaptionOverlay
from app.models.record import ControlState
from app.models.sources import AudioFrame
from app.services.features.feature_host import FeatureHost
from app.services.gateway.download_transport import DownloadOnlyTransport, FetchResult
from app.services.sources.ingestion_service import IngestionService

logger = structlog.get_logger(__name__)


class LiveCaptionService:
    """
    Captions for audio playing on the device, drawn on a system overlay.

    The only network traffic is the model fetch at start, over the
    download-only transport.
    """

    def __init__(
        self,
        ingestion: IngestionService,
        transport: DownloadOnlyTransport | None = None,
        recognizer: ISpeechRecognizer | None = None,
        host: FeatureHost | None = None,
        package: str = ASI_PACKAGE,
        model_uri: str | None = None,
    ):
        self.ingestion = ingestion
        self.transport = transport
        self.recognizer = recognizer or LabelEchoRecognizer()
        self.host = host
        self.package = package
        self.model_uri = model_uri
        self.model: bytes | None = None

    def start(self) -> FetchResult | None:
        """Fetch the configured caption model; the bundled recognizer stays in use if the fetch is denied."""
        if self.transport is None or self.model_uri is None:
            return None
        result = self.transport.fetch_model(self.model_uri, self.package, feature="live_caption")
        if result.blob is not None:
            self.model = result.blob
        return result

    def caption(
        self, frames: Sequence[AudioFrame], controls: ControlState, enabled: bool = True
    ) -> CaptionOverlay | None:
        """
        :param frames: Audio frames in playback order
        :param controls: Current controls
        :param enabled: User toggle; when off nothing is captured and no overlay is drawn
        :return: Overlay with one line per recognized admitted frame, or None when disabled
        """
        if not enabled:
            logger.debug("live_caption_disabled")
            return None
        if self.host is not None:
            self.host.handle()

        store = self.ingestion.store
        lines: list[str] = []
        for frame in frames:
            result = self.ingestion.capture_audio(frame, controls)
            if not result.stored:
                continue
            assert result.record_id is not None
            text = self.recognizer.recognize(store.get(result.record_id))
            if text:
                store.derive([result.record_id], text.encode("utf-8"), origin_package=self.package)
                lines.append(text)

        logger.info("live_caption_rendered", frames=len(frames), lines=len(lines))
        return CaptionOverlay(lines=lines)


def live_caption(
    frames: Sequence[AudioFrame], controls: ControlState, ingestion: IngestionService, enabled: bool = True
) -> CaptionOverlay | None:
    return LiveCaptionService(ingestion).caption(frames, controls, enabled)
