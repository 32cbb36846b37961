"""POST /count: member counts of a parametric family, optionally fitted."""

import logging

from fastapi import APIRouter, HTTPException, status

from app.logic.parser import parse, parse_polynomial, variable_id
from app.models.requests import CountRequest
from app.models.responses import CountResponse
from app.routes.errors import engine_errors
from app.services.counting import count_family, fit_quasi_polynomial

logger = logging.getLogger(__name__)

router = APIRouter()


@router.post(
    "/count",
    response_model=CountResponse,
    response_model_exclude_none=True,
    summary="Count a family inside a polynomial box",
)
def count(request: CountRequest) -> CountResponse:
    if request.t_min > request.t_max:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=f"t_min={request.t_min} exceeds t_max={request.t_max}",
        )
    if (request.fit_modulus is None) != (request.fit_degree is None):
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail="fit_modulus and fit_degree must be given together",
        )
    with engine_errors():
        table = count_family(
            parse(request.text),
            [variable_id(name) for name in request.variables],
            range(request.t_min, request.t_max + 1),
            parse_polynomial(request.lower),
            parse_polynomial(request.upper),
        )
        fit = None
        if request.fit_modulus is not None:
            fit = fit_quasi_polynomial(table, request.fit_modulus, request.fit_degree)
    return CountResponse(table=table, fit=fit)
