"""Reusable decorators for cross-cutting concerns."""

from tenacity import retry, retry_if_exception_type, stop_after_attempt, wait_none

from app.core.config import settings


class TransientTransportError(Exception):
    """Simulated server hiccup that a retry may clear."""


def transport_retry(func):
    """
    Retry decorator for simulated network transfers.

    Configuration:
    - Max attempts: settings.download_max_attempts
    - No wall-clock wait (simulated time never sleeps)
    - Retries on: TransientTransportError only
    - Re-raises: Yes (after max attempts)

    Usage:
        @transport_retry
        def _download(self, uri):
            ...
    """
    return retry(
        stop=stop_after_attempt(settings.download_max_attempts),
        wait=wait_none(),
        retry=retry_if_exception_type(TransientTransportError),
        reraise=True,
    )(func)
