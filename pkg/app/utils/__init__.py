"""Utility modules for ppres."""

from app.utils.logging import (
    StructuredLogFormatter,
    abbreviate_formula,
    configure_logging,
    fingerprint_formula,
    get_structured_logger,
    log_check_event,
    log_count_event,
    log_stage_event,
)

__all__ = [
    "fingerprint_formula",
    "abbreviate_formula",
    "StructuredLogFormatter",
    "get_structured_logger",
    "configure_logging",
    "log_stage_event",
    "log_check_event",
    "log_count_event",
]
