"""
Now Playing: identify the song on the lock screen.

The song record is fetched by PIR: the server answers an encrypted one-hot
query and never learns which song was looked up.
"""

import structlog
from pydantic import BaseModel, ConfigDict

from app.core.constants import ASI_PACKAGE
from app.core.exceptions import PirIndexException
from app.core.utils import sha256_hex
from app.implementations.label_echo_recognizer import LabelEchoRecognizer
from app.interfaces.speech_recognizer import ISpeechRecognizer
from app.models.data import DataCategory, DataDescriptor, DataSource
from app.models.egress import Channel, EgressRequest
from app.models.features import SongMatch
from app.models.record import ControlState
from app.models.sources import AudioFrame
from app.services.features.feature_host import FeatureHost
from app.services.gateway.gateway_service import GatewayService
from app.services.pir.client import PirClient, PirQuery, PirResponse
from app.services.pir.server import PirServer
from app.services.sources.ingestion_service import IngestionService

logger = structlog.get_logger(__name__)

PIR_POLICY_ID = "pir_lookup"


class PirExchange(BaseModel):
    """What the PIR server observed for one lookup."""

    query_bytes: int
    query_digest: str
    response_bytes: int
    scalar_mul: int
    add: int

    model_config = ConfigDict(frozen=True)


class NowPlayingService:
    def __init__(
        self,
        ingestion: IngestionService,
        gateway: GatewayService,
        server: PirServer,
        client: PirClient,
        recognizer: ISpeechRecognizer | None = None,
        host: FeatureHost | None = None,
        package: str = ASI_PACKAGE,
        policy_id: str = PIR_POLICY_ID,
    ):
        self.ingestion = ingestion
        self.gateway = gateway
        self.server = server
        self.client = client
        self.recognizer = recognizer or LabelEchoRecognizer()
        self.host = host
        self.package = package
        self.policy_id = policy_id
        self.exchanges: list[PirExchange] = []

    def listen(self, frame: AudioFrame, controls: ControlState) -> SongMatch | None:
        """
        :param frame: Audio playing on the device
        :param controls: Current controls
        :return: Lock-screen match, or None if the frame was dropped, unknown or the lookup was denied
        """
        if self.host is not None:
            self.host.handle()

        captured = self.ingestion.capture_audio(frame, controls)
        if captured.record_id is None:
            return None
        song_id = self.recognizer.recognize(self.ingestion.store.get(captured.record_id))
        if song_id is None:
            return None
        try:
            index = self.server.database.index_of(song_id)
        except PirIndexException:
            logger.info("now_playing_unknown_song")
            return None

        query = self.client.build_query(index, self.server.database.size).to_bytes()
        request = EgressRequest(
            requester=self.package,
            descriptor=DataDescriptor.for_source(DataCategory.DERIVED, DataSource.FRAMEWORK_AUDIO, self.package),
            channel=Channel.PIR_QUERY,
            payload=query,
            policy_id=self.policy_id,
            feature="now_playing",
        )
        if not self.gateway.gate(request).allowed:
            return None

        response = self.server.answer(PirQuery.from_bytes(query)).to_bytes()
        self.exchanges.append(
            PirExchange(
                query_bytes=len(query),
                query_digest=sha256_hex(query),
                response_bytes=len(response),
                scalar_mul=self.server.last_trace["scalar_mul"],
                add=self.server.last_trace["add"],
            )
        )
        record = self.client.decode(PirResponse.from_bytes(response))
        self.ingestion.store.derive([captured.record_id], record, origin_package=self.package)
        title = record.decode("utf-8", errors="replace")
        logger.info("now_playing_matched", query_bytes=len(query))
        return SongMatch(song_id=song_id, title=title)
