"""Structured logging utilities.

This module provides:
- Formula fingerprinting and abbreviation, so large formulas never flood logs
- Structured JSON logging formatter
- configure_logging for the command-line entry point (stderr only)
- Helper functions for consistent pipeline, check and count log lines
"""

import hashlib
import json
import logging
import sys
from datetime import datetime, timezone
from typing import Any, Optional

EXTRA_FIELDS = (
    "command",
    "stage",
    "variable",
    "cases",
    "output_size",
    "elapsed_ms",
    "formula_hash",
    "status",
    "points",
)


def fingerprint_formula(text: Optional[str]) -> str:
    """Stable short identifier for a formula text.

    Args:
        text: Printed formula

    Returns:
        8 hex characters of its SHA-256 prefixed with 'fm_'
    """
    if not text:
        return "fm_empty"
    return f"fm_{hashlib.sha256(text.encode()).hexdigest()[:8]}"


def abbreviate_formula(text: str, limit: int = 80) -> str:
    """Truncate a formula text to at most `limit` characters."""
    if len(text) <= limit:
        return text
    return f"{text[: max(limit - 3, 0)]}..."


class StructuredLogFormatter(logging.Formatter):
    """JSON formatter emitting one object per line."""

    def __init__(self, include_timestamp: bool = True):
        super().__init__()
        self.include_timestamp = include_timestamp

    def format(self, record: logging.LogRecord) -> str:
        log_data: dict[str, Any] = {
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }

        if self.include_timestamp:
            log_data["timestamp"] = datetime.now(timezone.utc).isoformat()

        for name in EXTRA_FIELDS:
            if hasattr(record, name):
                log_data[name] = getattr(record, name)

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_data)


def get_structured_logger(name: str, level: int = logging.INFO) -> logging.Logger:
    """Get a logger configured for structured JSON output.

    Args:
        name: Logger name (typically __name__)
        level: Logging level (default: INFO)

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(StructuredLogFormatter())
        logger.addHandler(handler)

    return logger


def configure_logging(level: str = "WARNING", fmt: str = "json") -> None:
    """Route the `app` logger hierarchy to standard error.

    Standard output stays reserved for command results.

    Args:
        level: Level name (DEBUG, INFO, WARNING, ERROR)
        fmt: "json" for StructuredLogFormatter, "text" for plain lines
    """
    root = logging.getLogger("app")
    root.setLevel(getattr(logging, level.upper(), logging.WARNING))
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    if fmt == "json":
        handler.setFormatter(StructuredLogFormatter())
    else:
        handler.setFormatter(logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s"))
    root.addHandler(handler)
    root.propagate = False


def log_stage_event(
    logger: logging.Logger,
    stage: str,
    variable: Optional[str] = None,
    cases: Optional[int] = None,
    output_size: Optional[int] = None,
    elapsed_ms: Optional[float] = None,
) -> None:
    """Log one pipeline stage (normalize, eliminate, simplify, qfree-expand).

    Args:
        logger: Logger instance
        stage: Stage name
        variable: Printed name of the variable being eliminated
        cases: Number of case splits generated
        output_size: Node count of the stage result
        elapsed_ms: Stage duration in milliseconds
    """
    log_extra: dict[str, Any] = {"stage": stage}
    message_parts = [f"stage={stage}"]

    if variable:
        log_extra["variable"] = variable
        message_parts.append(f"var={variable}")
    if cases is not None:
        log_extra["cases"] = cases
        message_parts.append(f"cases={cases}")
    if output_size is not None:
        log_extra["output_size"] = output_size
        message_parts.append(f"size={output_size}")
    if elapsed_ms is not None:
        log_extra["elapsed_ms"] = elapsed_ms
        message_parts.append(f"time={elapsed_ms:.1f}ms")

    logger.debug(" ".join(message_parts), extra=log_extra)


def log_check_event(
    logger: logging.Logger,
    left_text: str,
    right_text: str,
    status: str,
    points: int,
    elapsed_ms: Optional[float] = None,
) -> None:
    """Log the outcome of a grid equivalence check.

    Formula texts are fingerprinted, never logged verbatim.
    """
    formula_hash = f"{fingerprint_formula(left_text)}:{fingerprint_formula(right_text)}"
    log_extra: dict[str, Any] = {"formula_hash": formula_hash, "status": status, "points": points}
    message_parts = [f"check={formula_hash}", f"status={status}", f"points={points}"]
    if elapsed_ms is not None:
        log_extra["elapsed_ms"] = elapsed_ms
        message_parts.append(f"time={elapsed_ms:.1f}ms")

    message = " ".join(message_parts)
    if status == "counterexample":
        logger.warning(message, extra=log_extra)
    else:
        logger.info(message, extra=log_extra)


def log_count_event(
    logger: logging.Logger,
    formula_text: str,
    t: int,
    count: int,
    truncated: bool,
) -> None:
    """Log one row of a family count."""
    formula_hash = fingerprint_formula(formula_text)
    message = f"count={formula_hash} t={t} members={count} truncated={truncated}"
    log_extra = {"formula_hash": formula_hash, "points": count}

    if truncated:
        logger.warning(message, extra=log_extra)
    else:
        logger.info(message, extra=log_extra)
