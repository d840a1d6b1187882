from app.interfaces.entity_extractor import IEntityExtractor

ENTITY_FIELD_PREFIX = "entity"


class TaggedEntityExtractor(IEntityExtractor):
    """Entities are the values of structured fields whose key starts with "entity", in key order."""

    def extract(self, view_text: str, structured_fields: dict[str, str]) -> list[str]:
        return [
            value
            for key, value in sorted(structured_fields.items())
            if key.startswith(ENTITY_FIELD_PREFIX) and value
        ]
