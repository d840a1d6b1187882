from app.core.config import settings
from app.core.log_config import configure_logging

__all__ = [
    "settings",
    "configure_logging",
]
