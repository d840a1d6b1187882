"""
Smart Reply: reply suggestions from entities on screen.

Candidates come only from live Content Capture records of allowlisted apps.
FLAG_SECURE content never reaches the store, so it can never be suggested.
"""

import json
from collections.abc import Iterable

import structlog

from app.core.constants import ASI_PACKAGE
from app.implementations.tagged_entity_extractor import TaggedEntityExtractor
from app.interfaces.entity_extractor import IEntityExtractor
from app.models.data import DataSource
from app.models.features import ReplyCandidate
from app.services.features.feature_host import FeatureHost
from app.services.sandbox.ephemeral_store import EphemeralStoreService

logger = structlog.get_logger(__name__)


class SmartReplyService:
    def __init__(
        self,
        store: EphemeralStoreService,
        allowlist: Iterable[str],
        extractor: IEntityExtractor | None = None,
        host: FeatureHost | None = None,
        package: str = ASI_PACKAGE,
    ):
        self.store = store
        self.allowlist = frozenset(allowlist)
        self.extractor = extractor or TaggedEntityExtractor()
        self.host = host
        self.package = package

    def suggest(self) -> list[ReplyCandidate]:
        """
        Extract reply candidates from the current screen captures.

        Each candidate is stored as a Derived record whose parent is the
        capture it came from, so deleting the capture's locus removes it.

        :return: Candidates in capture order, first occurrence of each text only
        """
        if self.host is not None:
            self.host.handle()

        now = self.store.clock.now
        seen: set[str] = set()
        candidates: list[ReplyCandidate] = []
        for record in self.store.live_records(DataSource.SCREEN_CAPTURE):
            app = record.descriptor.origin_package
            if app not in self.allowlist:
                continue
            body = json.loads(record.payload)
            for text in self.extractor.extract(body.get("view_text", ""), body.get("structured_fields", {})):
                if text in seen:
                    continue
                seen.add(text)
                record_id = self.store.derive([record.id], text.encode("utf-8"), origin_package=self.package)
                candidates.append(
                    ReplyCandidate(
                        text=text,
                        source_locus=record.locus_id or "",
                        source_app=app,
                        created_at=now,
                        record_id=record_id,
                    )
                )

        logger.info("smart_reply_suggested", candidates=len(candidates))
        return candidates


def smart_reply_suggest(store: EphemeralStoreService, allowlist: Iterable[str]) -> list[ReplyCandidate]:
    """Suggestions with the default extractor; the store carries the clock."""
    return SmartReplyService(store, allowlist).suggest()
