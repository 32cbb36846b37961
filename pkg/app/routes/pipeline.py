"""Quantifier elimination endpoints.

- POST /eliminate: bound every unbounded quantifier
- POST /qfree: remove all quantifiers from an eligible formula (422 otherwise)
"""

import logging

from fastapi import APIRouter

from app.config import settings
from app.engine.eliminate import bound_all_quantifiers
from app.engine.qfree import eliminate_to_qfree
from app.logic.parser import parse, print_formula
from app.models.requests import EliminateRequest, QfreeRequest
from app.models.responses import EliminationStats, FormulaResponse
from app.routes.errors import engine_errors
from app.utils.logging import fingerprint_formula

logger = logging.getLogger(__name__)

router = APIRouter()


@router.post("/eliminate", response_model=FormulaResponse, summary="Bound all quantifiers")
def eliminate(request: EliminateRequest) -> FormulaResponse:
    limit = request.expansion_limit
    if limit is None:
        limit = settings.PPRES_SIMPLIFY_EXPANSION_LIMIT
    with engine_errors():
        stats = EliminationStats()
        output = bound_all_quantifiers(parse(request.text), expansion_limit=limit, stats=stats)
    logger.info(
        f"Eliminated {stats.quantifiers_eliminated} quantifier(s) "
        f"from {fingerprint_formula(request.text)}, output size {stats.output_size}"
    )
    return FormulaResponse(formula=print_formula(output), stats=stats)


@router.post(
    "/qfree",
    response_model=FormulaResponse,
    summary="Quantifier-free elimination",
    responses={422: {"description": "Formula fails the quantifier-free criterion"}},
)
def qfree(request: QfreeRequest) -> FormulaResponse:
    with engine_errors():
        stats = EliminationStats()
        output = eliminate_to_qfree(
            parse(request.text),
            request.expansion_limit or settings.PPRES_QFREE_EXPANSION_LIMIT,
            stats,
        )
    return FormulaResponse(formula=print_formula(output), stats=stats)
