from contextlib import asynccontextmanager
from datetime import datetime, timezone

import structlog
import uvicorn
from fastapi import FastAPI, Request, status
from fastapi.responses import JSONResponse

from app.api.v1.endpoints.audit_router import router as audit_router
from app.api.v1.endpoints.policy_router import router as policy_router
from app.api.v1.endpoints.scenario_router import router as scenario_router
from app.core.config import settings
from app.core.exceptions import (
    DomainException,
    NotFoundException,
    ProtocolException,
    ValidationException,
)
from app.core.log_config import configure_logging
from app.schemas.common_schemas import HealthResponse

configure_logging()

logger = structlog.get_logger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Lifespan event handler for startup and shutdown.
    """
    logger.info("fastapi_starting", version=settings.tool_version, config_hash=settings.config_hash)
    yield
    logger.info("fastapi_shutdown_complete")


app = FastAPI(
    title=settings.app_name,
    description="Deterministic simulator of a private compute sandbox",
    version=settings.tool_version,
    docs_url="/docs",
    lifespan=lifespan,
    redirect_slashes=False,
)

# ============================================================================
# Exception Handlers (Convert Domain Exceptions → HTTP Responses)
# ============================================================================


def _error_response(status_code: int, exc: DomainException) -> JSONResponse:
    return JSONResponse(
        status_code=status_code,
        content={
            "detail": exc.message,
            "error_code": exc.error_code,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        },
    )


@app.exception_handler(NotFoundException)
async def not_found_exception_handler(request: Request, exc: NotFoundException) -> JSONResponse:
    """Handle unknown package / record exceptions."""
    return _error_response(status.HTTP_404_NOT_FOUND, exc)


@app.exception_handler(ValidationException)
async def validation_exception_handler(request: Request, exc: ValidationException) -> JSONResponse:
    """Handle malformed manifests, configs, policies and scenarios."""
    return _error_response(status.HTTP_400_BAD_REQUEST, exc)


@app.exception_handler(ProtocolException)
async def protocol_exception_handler(request: Request, exc: ProtocolException) -> JSONResponse:
    """Handle aborted protocol runs."""
    return _error_response(status.HTTP_409_CONFLICT, exc)


@app.exception_handler(DomainException)
async def domain_exception_handler(request: Request, exc: DomainException) -> JSONResponse:
    """Fallback handler for all other domain exceptions."""
    logger.error("unhandled_domain_exception", error_code=exc.error_code, error=exc.message)
    return _error_response(status.HTTP_500_INTERNAL_SERVER_ERROR, exc)


# ============================================================================
# Router Registration
# ============================================================================

API_V1_PREFIX = "/api/v1"

app.include_router(policy_router, prefix=API_V1_PREFIX)
app.include_router(scenario_router, prefix=API_V1_PREFIX)
app.include_router(audit_router, prefix=API_V1_PREFIX)


@app.get("/")
def root():
    return {
        "message": "PCC Simulator API",
        "status": "running",
        "version": settings.tool_version,
        "docs": "/docs",
        "endpoints": {
            "verify": "/api/v1/policy/verify",
            "run": "/api/v1/scenarios/run",
            "audit": "/api/v1/audit/query",
        },
    }


@app.get("/health", response_model=HealthResponse)
async def health_check() -> HealthResponse:
    """Basic health check endpoint."""
    return HealthResponse(status="healthy", version=settings.tool_version, config_hash=settings.config_hash)


if __name__ == "__main__":
    uvicorn.run("main:app", host="0.0.0.0", port=8000, reload=settings.debug)
