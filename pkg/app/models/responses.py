"""Report and response models.

This module contains Pydantic models for results that leave the engine:
- EliminationStats: counters collected while bounding quantifiers
- Violation / EligibilityReport: quantifier-free criterion scan
- Witness / GridSpec / EquivReport: finite-grid equivalence checks
- CountRow / BoxSpec / CountTable: parametric family counts
- FitClass / FitReport: empirical quasi-polynomial fits
- CommandResult: the `--json` envelope shared by every CLI subcommand
- FormulaResponse / EvalResponse / CountResponse: HTTP payloads

All models use Pydantic v2 syntax and serialize with
`model_dump_json(exclude_none=True)`.
"""

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field


class EliminationStats(BaseModel):
    """Counters for one run of the quantifier-bounding pipeline."""

    quantifiers_eliminated: int = Field(default=0, ge=0, description="Unbounded quantifiers removed")
    sign_cases: int = Field(default=0, ge=0, description="Coefficient sign cases generated by normalization")
    divisibility_cases: int = Field(default=0, ge=0, description="Divisibility case splits generated")
    bset_entries: int = Field(default=0, ge=0, description="Lower-bound terms collected")
    expanded_disjuncts: int = Field(default=0, ge=0, description="Disjuncts produced by unrolling bounded quantifiers")
    output_size: int = Field(default=0, ge=0, description="Node count of the result")
    unbounded_remaining: int = Field(default=0, ge=0, description="Unbounded quantifiers left in the result")


class Violation(BaseModel):
    """One place where the quantifier-free criterion fails."""

    location: str = Field(..., description="Path of the offending subformula", examples=["/E y/eq"])
    condition: Literal["1", "2"] = Field(
        ...,
        description="1: non-constant divisibility modulus; 2: non-constant coefficient on a quantified variable",
    )
    offending: str = Field(..., description="Offending polynomial or summand", examples=["t*y"])


class EligibilityReport(BaseModel):
    """Result of scanning a formula for the quantifier-free criterion."""

    eligible: bool = Field(..., description="True iff no violations were found")
    violations: list[Violation] = Field(default_factory=list)


class Witness(BaseModel):
    """A grid point where two formulas disagree."""

    t: int = Field(..., ge=0, description="Parameter value")
    assignment: dict[str, int] = Field(default_factory=dict, description="Free-variable values")
    left: bool = Field(..., description="Truth value of the first formula")
    right: bool = Field(..., description="Truth value of the second formula")


class GridSpec(BaseModel):
    t_min: int = Field(..., ge=0)
    t_max: int = Field(..., ge=0)
    radius: int = Field(..., ge=0, description="Assignments range over [-radius, radius]")
    variables: list[str] = Field(default_factory=list)


class EquivReport(BaseModel):
    """Outcome of a finite-grid equivalence check.

    A pass is evidence on the grid only; a counterexample is a refutation
    and replays exactly.
    """

    status: Literal["pass", "counterexample", "inconclusive"]
    witness: Optional[Witness] = None
    grid: GridSpec
    points_checked: int = Field(default=0, ge=0)


class CountRow(BaseModel):
    t: int = Field(..., ge=0)
    count: int = Field(..., ge=0)
    truncated: bool = Field(
        default=False,
        description="A member was found just outside the box, so the family exceeds it",
    )


class BoxSpec(BaseModel):
    lower: str = Field(..., description="Polynomial lower corner, applied to every coordinate", examples=["0"])
    upper: str = Field(..., description="Polynomial upper corner", examples=["2t^2 + t"])


class CountTable(BaseModel):
    """Exact member counts of a parametric family within a box."""

    rows: list[CountRow] = Field(default_factory=list)
    box: BoxSpec
    variables: list[str] = Field(default_factory=list)


class FitClass(BaseModel):
    """Least-squares polynomial for one residue class of t."""

    residue: int = Field(..., ge=0)
    points: int = Field(..., ge=0, description="Table rows in this class")
    coefficients: list[str] = Field(default_factory=list, description="Rational coefficients, constant term first")
    polynomial: Optional[str] = None
    residuals: list[str] = Field(default_factory=list)
    exact: bool = False
    note: Optional[str] = None


class FitReport(BaseModel):
    """Empirical quasi-polynomial fit of a count table; never a proof."""

    modulus: int = Field(..., ge=1)
    degree: int = Field(..., ge=0)
    tail_from: int = Field(..., ge=0)
    classes: list[FitClass] = Field(default_factory=list)
    exact: bool = False
    label: str = "empirical"


class CommandResult(BaseModel):
    """Machine-readable envelope printed by `ppres --json`."""

    command: str
    input: list[str] = Field(default_factory=list, description="Input origins")
    result: Any = None
    stats: Optional[dict[str, Any]] = None
    witness: Optional[Witness] = None


class FormulaResponse(BaseModel):
    """A formula rendered back to text, with optional pipeline statistics."""

    formula: str = Field(..., examples=["D[2](x)"])
    stats: Optional[EliminationStats] = None


class EvalResponse(BaseModel):
    value: bool
    method: Literal["enumeration", "cooper"] = Field(
        ..., description="Finite enumeration or classical elimination"
    )


class CountResponse(BaseModel):
    table: CountTable
    fit: Optional[FitReport] = None
