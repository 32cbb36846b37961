"""FastAPI application entry point for the ppres engine.

This module initializes the FastAPI application with:
- Startup configuration validation and logging setup
- Health check endpoint
- Routers for parsing, evaluation, elimination, grid checks and counting
- CORS configuration for development

Run with `uvicorn app.main:app`.
"""

import logging
from contextlib import asynccontextmanager
from datetime import datetime, timezone
from typing import Any

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.config import ConfigurationError, settings, validate_startup_configuration
from app.routes.check import router as check_router
from app.routes.count import router as count_router
from app.routes.formulas import router as formulas_router
from app.routes.pipeline import router as pipeline_router
from app.utils.logging import configure_logging

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan manager.

    Handles startup and shutdown events:
    - Startup: Configures logging and validates configuration
    - Shutdown: Logs only; the engine holds no resources
    """
    configure_logging(settings.PPRES_LOG_LEVEL, settings.PPRES_LOG_FORMAT)
    logger.info("Starting ppres engine...")
    try:
        validate_startup_configuration()
        logger.info("Configuration validated successfully")
    except ConfigurationError as e:
        logger.warning(f"Configuration problems, continuing with defaults: {e.message}")

    yield

    logger.info("Shutting down ppres engine...")


app = FastAPI(
    title="ppres",
    description=(
        "Quantifier bounding for parametric Presburger arithmetic: formulas whose "
        "coefficients are integer polynomials in a parameter t. Unbounded quantifiers "
        "are replaced by quantifiers over polynomially bounded ranges."
    ),
    version="1.0.0",
    lifespan=lifespan,
    docs_url="/docs",
    redoc_url="/redoc",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.get("/health", tags=["Health"])
async def health_check() -> dict[str, Any]:
    """Health check endpoint for service monitoring."""
    return {
        "status": "healthy",
        "service": "ppres",
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


app.include_router(formulas_router, prefix="/formulas", tags=["Formulas"])
app.include_router(pipeline_router, tags=["Elimination"])
app.include_router(check_router, tags=["Oracle"])
app.include_router(count_router, tags=["Counting"])


@app.get("/", tags=["Root"])
async def root() -> dict[str, str]:
    return {
        "name": "ppres API",
        "docs": "/docs",
        "health": "/health",
    }
