import re
from abc import abstractmethod

from app.models.sources import AppSearchDoc
from app.repositories.base_repository import BaseRepository

_TOKEN = re.compile(r"\w+")


def tokenize(text: str) -> list[str]:
    """Case-sensitive word tokens."""
    return _TOKEN.findall(text)


def contains_tokens(text: str, term_tokens: list[str]) -> bool:
    """True if the term's tokens appear contiguously among the text's tokens."""
    tokens = tokenize(text)
    width = len(term_tokens)
    if width == 0:
        return False
    return any(tokens[i : i + width] == term_tokens for i in range(len(tokens) - width + 1))


class IAppSearchRepository(BaseRepository[tuple[str, str], AppSearchDoc]):
    """Abstract interface for the AppSearch index."""

    @abstractmethod
    def search(self, term: str) -> list[AppSearchDoc]:
        """Documents with a body value containing the term as whole tokens."""
        pass


class AppSearchRepository(IAppSearchRepository):
    """In-memory AppSearch index; (app, doc_id) is unique and a repeat put replaces."""

    def key_of(self, entity: AppSearchDoc) -> tuple[str, str]:
        return (entity.app, entity.doc_id)

    def search(self, term: str) -> list[AppSearchDoc]:
        term_tokens = tokenize(term)
        return [
            doc
            for doc in self._items.values()
            if any(contains_tokens(value, term_tokens) for value in doc.body.values())
        ]
