"""Request models for the HTTP surface.

Formulas travel as text in the syntax accepted by app.logic.parser.
"""

from typing import Optional

from pydantic import BaseModel, Field


class FormulaRequest(BaseModel):
    """A single formula."""

    text: str = Field(
        ...,
        min_length=1,
        description="Formula text",
        examples=["E y. 2*y = x"],
    )


class EvalRequest(FormulaRequest):
    t: int = Field(..., ge=0, description="Parameter value")
    assignment: dict[str, int] = Field(
        default_factory=dict,
        description="Values of the free variables, keyed by printed name",
        examples=[{"x": 5}],
    )


class EliminateRequest(FormulaRequest):
    expansion_limit: Optional[int] = Field(
        default=None,
        ge=0,
        description="Override for the simplifier's bounded-quantifier unrolling limit",
    )


class QfreeRequest(FormulaRequest):
    expansion_limit: Optional[int] = Field(
        default=None,
        ge=1,
        description="Override for the total disjunct budget",
    )


class CheckRequest(BaseModel):
    """Two formulas to compare on a finite grid."""

    left: str = Field(..., min_length=1, examples=["x < 0"])
    right: str = Field(..., min_length=1, examples=["0 < x"])
    t_min: Optional[int] = Field(default=None, ge=0)
    t_max: Optional[int] = Field(default=None, ge=0)
    radius: Optional[int] = Field(default=None, ge=0)


class CountRequest(FormulaRequest):
    """Count a family on t_min..t_max inside the box [lower, upper]^d."""

    variables: list[str] = Field(..., min_length=1, examples=[["x"]])
    t_min: int = Field(default=1, ge=0)
    t_max: int = Field(default=8, ge=0)
    lower: str = Field(default="0", description="Polynomial in t", examples=["0"])
    upper: str = Field(..., description="Polynomial in t", examples=["2t^2 + t"])
    fit_modulus: Optional[int] = Field(default=None, ge=1)
    fit_degree: Optional[int] = Field(default=None, ge=0)
