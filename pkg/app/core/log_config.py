import logging
import sys

import structlog

from app.core.config import settings


def configure_logging(debug: bool | None = None, level: str | None = None) -> None:
    """
    Configure structlog for the CLI and the HTTP app.

    Logs go to stderr so stdout stays reserved for JSON Lines and reports.

    :param debug: Use the console renderer instead of JSON (defaults to settings.debug)
    :param level: Minimum log level name (defaults to settings.log_level)
    """
    use_console = settings.debug if debug is None else debug
    level_name = level or settings.log_level

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.dev.set_exc_info,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            structlog.dev.ConsoleRenderer() if use_console else structlog.processors.JSONRenderer(),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(logging.getLevelName(level_name)),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )
