"""
Parser for the allow-association config dialect.

Grammar (whitespace free between tokens):
    document  := (element | comment)*
    comment   := "//" <rest of line>
    element   := "<allow-association" (attribute)+ "/>"
    attribute := name "=" '"' value '"'   with name in {target, allowed}
"""

import re

import structlog

from app.core.exceptions import PolicyParseException
from app.core.validators import is_valid_package_id
from app.models.package import AssociationRule

logger = structlog.get_logger(__name__)

ELEMENT_OPEN = "<allow-association"
ELEMENT_CLOSE = "/>"
KNOWN_ATTRIBUTES = ("target", "allowed")
_ATTRIBUTE_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_:-]*")


class _Scanner:
    """Character cursor that tracks the current line number."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1

    @property
    def done(self) -> bool:
        return self.pos >= len(self.text)

    def startswith(self, token: str) -> bool:
        return self.text.startswith(token, self.pos)

    def advance(self, count: int = 1) -> str:
        chunk = self.text[self.pos : self.pos + count]
        self.line += chunk.count("\n")
        self.pos += len(chunk)
        return chunk

    def skip_whitespace(self) -> None:
        while not self.done and self.text[self.pos].isspace():
            self.advance()

    def skip_line(self) -> None:
        end = self.text.find("\n", self.pos)
        self.advance((len(self.text) if end == -1 else end) - self.pos)


def parse_association_config(text: str) -> list[AssociationRule]:
    """
    Parse an allow-association document.

    :param text: UTF-8 document text
    :return: One rule per element, in document order
    :raises PolicyParseException: On malformed elements, with the offending line
    """
    scanner = _Scanner(text)
    rules: list[AssociationRule] = []

    while True:
        scanner.skip_whitespace()
        if scanner.done:
            break
        if scanner.startswith("//"):
            scanner.skip_line()
            continue
        if scanner.startswith(ELEMENT_OPEN):
            rules.append(_parse_element(scanner))
            continue
        raise PolicyParseException(f"unexpected content {scanner.text[scanner.pos:scanner.pos + 20]!r}", scanner.line)

    logger.debug("association_config_parsed", rules=len(rules))
    return rules


def _parse_element(scanner: _Scanner) -> AssociationRule:
    start_line = scanner.line
    scanner.advance(len(ELEMENT_OPEN))
    attributes: dict[str, str] = {}

    while True:
        scanner.skip_whitespace()
        if scanner.done:
            raise PolicyParseException("unterminated element", start_line)
        if scanner.startswith(ELEMENT_CLOSE):
            scanner.advance(len(ELEMENT_CLOSE))
            break

        match = _ATTRIBUTE_NAME.match(scanner.text, scanner.pos)
        if match is None:
            raise PolicyParseException(f"expected attribute name, found {scanner.text[scanner.pos]!r}", scanner.line)
        name = match.group(0)
        if name not in KNOWN_ATTRIBUTES:
            raise PolicyParseException(f"unknown attribute '{name}'", scanner.line)
        if name in attributes:
            raise PolicyParseException(f"duplicate attribute '{name}'", scanner.line)
        scanner.advance(len(name))

        scanner.skip_whitespace()
        if not scanner.startswith("="):
            raise PolicyParseException(f"expected '=' after '{name}'", scanner.line)
        scanner.advance()
        scanner.skip_whitespace()
        if not scanner.startswith('"'):
            raise PolicyParseException(f"expected quoted value for '{name}'", scanner.line)
        quote_line = scanner.line
        scanner.advance()
        value_start = scanner.pos
        while not scanner.done and scanner.text[scanner.pos] not in '"\n':
            scanner.advance()
        if scanner.done or scanner.text[scanner.pos] == "\n":
            raise PolicyParseException(f"unterminated quote in '{name}'", quote_line)
        attributes[name] = scanner.text[value_start : scanner.pos]
        scanner.advance()

    missing = [name for name in KNOWN_ATTRIBUTES if name not in attributes]
    if missing:
        raise PolicyParseException(f"missing attribute(s) {', '.join(missing)}", start_line)
    for name in KNOWN_ATTRIBUTES:
        if not is_valid_package_id(attributes[name]):
            raise PolicyParseException(f"'{attributes[name]}' is not a valid package id", start_line)

    return AssociationRule(target=attributes["target"], allowed=attributes["allowed"])


def serialize_association_config(rules: list[AssociationRule]) -> str:
    """
    Emit rules in the canonical dialect; parse_association_config inverts this.

    :param rules: Rules in the desired order
    :return: Document text, one element per line
    """
    return "".join(f'<allow-association target="{rule.target}" allowed="{rule.allowed}" />\n' for rule in rules)
