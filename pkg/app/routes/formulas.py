"""Parsing and evaluation endpoints.

- POST /formulas/parse: canonical text of a formula
- POST /formulas/eval: truth value at one t and one assignment
"""

import logging

from fastapi import APIRouter

from app.logic.formula import count_unbounded_quantifiers, evaluate, free_variables
from app.logic.parser import parse, print_formula
from app.models.requests import EvalRequest, FormulaRequest
from app.models.responses import EvalResponse, FormulaResponse
from app.routes.errors import engine_errors
from app.services.oracle import classical_cooper_decide, ground

logger = logging.getLogger(__name__)

router = APIRouter()


@router.post(
    "/parse",
    response_model=FormulaResponse,
    response_model_exclude_none=True,
    summary="Parse and print a formula",
)
def parse_formula(request: FormulaRequest) -> FormulaResponse:
    with engine_errors():
        return FormulaResponse(formula=print_formula(parse(request.text)))


@router.post(
    "/eval",
    response_model=EvalResponse,
    summary="Evaluate a formula",
    description=(
        "Bounded quantifiers are enumerated. Formulas with unbounded quantifiers "
        "are decided by classical elimination at the given t."
    ),
)
def eval_formula(request: EvalRequest) -> EvalResponse:
    with engine_errors():
        phi = parse(request.text)
        by_name = {str(v): v for v in free_variables(phi)}
        env = {by_name[name]: value for name, value in request.assignment.items() if name in by_name}
        grounded = ground(phi, request.t)
        if count_unbounded_quantifiers(grounded):
            return EvalResponse(value=classical_cooper_decide(grounded, env), method="cooper")
        return EvalResponse(value=evaluate(grounded, request.t, env), method="enumeration")
