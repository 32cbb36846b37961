"""Pydantic models for reports, the CLI envelope and HTTP payloads.

Request Models:
- FormulaRequest, EvalRequest, EliminateRequest, QfreeRequest
- CheckRequest, CountRequest

Response Models:
- EliminationStats, EligibilityReport, Violation
- EquivReport, Witness, GridSpec
- CountTable, CountRow, BoxSpec, FitReport, FitClass, CountResponse
- CommandResult, FormulaResponse, EvalResponse
"""

from app.models.requests import (
    CheckRequest,
    CountRequest,
    EliminateRequest,
    EvalRequest,
    FormulaRequest,
    QfreeRequest,
)
from app.models.responses import (
    BoxSpec,
    CommandResult,
    CountResponse,
    CountRow,
    CountTable,
    EligibilityReport,
    EliminationStats,
    EquivReport,
    EvalResponse,
    FitClass,
    FitReport,
    FormulaResponse,
    GridSpec,
    Violation,
    Witness,
)

__all__ = [
    # Request models
    "FormulaRequest",
    "EvalRequest",
    "EliminateRequest",
    "QfreeRequest",
    "CheckRequest",
    "CountRequest",
    # Response models
    "EliminationStats",
    "Violation",
    "EligibilityReport",
    "Witness",
    "GridSpec",
    "EquivReport",
    "CountRow",
    "BoxSpec",
    "CountTable",
    "FitClass",
    "FitReport",
    "CountResponse",
    "CommandResult",
    "FormulaResponse",
    "EvalResponse",
]
