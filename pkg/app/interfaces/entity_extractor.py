from abc import ABC, abstractmethod


class IEntityExtractor(ABC):
    """Abstract interface for extracting reply-worthy entities from captured screen content."""

    @abstractmethod
    def extract(self, view_text: str, structured_fields: dict[str, str]) -> list[str]:
        """
        :param view_text: On-screen text
        :param structured_fields: Tagged fields captured with the view
        :return: Entity strings in a stable order
        """
        pass
