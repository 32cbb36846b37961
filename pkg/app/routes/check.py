"""POST /check: finite-grid equivalence of two formulas."""

import logging

from fastapi import APIRouter, HTTPException, status

from app.config import settings
from app.logic.parser import parse
from app.models.requests import CheckRequest
from app.models.responses import EquivReport
from app.routes.errors import engine_errors
from app.services.oracle import check_equiv

logger = logging.getLogger(__name__)

router = APIRouter()


@router.post(
    "/check",
    response_model=EquivReport,
    response_model_exclude_none=True,
    summary="Compare two formulas on a finite grid",
    description=(
        "A pass is evidence on the grid only. A counterexample carries the first "
        "failing (t, assignment) and always replays."
    ),
)
def check(request: CheckRequest) -> EquivReport:
    t_min = request.t_min if request.t_min is not None else settings.PPRES_T_MIN
    t_max = request.t_max if request.t_max is not None else settings.PPRES_T_MAX
    radius = request.radius if request.radius is not None else settings.PPRES_BOX_RADIUS
    if t_min > t_max:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=f"t_min={t_min} exceeds t_max={t_max}",
        )
    with engine_errors():
        return check_equiv(parse(request.left), parse(request.right), range(t_min, t_max + 1), radius)
