"""Translation of engine exceptions into HTTP errors.

    ParseError, ArityMismatchError, MissingAssignmentError,
    CountingError, UnboundedQuantifierError  -> 400
    IneligibleFormulaError                   -> 422 (detail is the EligibilityReport)
    ExpansionLimitError                      -> 413
"""

import logging
from contextlib import contextmanager
from typing import Iterator

from fastapi import HTTPException, status

from app.engine.qfree import ExpansionLimitError, IneligibleFormulaError
from app.logic.formula import MissingAssignmentError, UnboundedQuantifierError
from app.logic.parser import ParseError
from app.services.counting import CountingError
from app.services.oracle import ArityMismatchError

logger = logging.getLogger(__name__)


@contextmanager
def engine_errors() -> Iterator[None]:
    try:
        yield
    except IneligibleFormulaError as e:
        logger.info(f"Rejected ineligible formula: {len(e.report.violations)} violation(s)")
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=e.report.model_dump(),
        ) from e
    except ExpansionLimitError as e:
        raise HTTPException(
            status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE,
            detail=e.message,
        ) from e
    except ParseError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e)) from e
    except (ArityMismatchError, MissingAssignmentError, CountingError, UnboundedQuantifierError) as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=e.message) from e
