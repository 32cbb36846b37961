"""Textual syntax for parametric Presburger formulas.

This module provides:
- parse: text -> Formula (lark Earley parser + transformer)
- parse_polynomial: text -> Polynomial in t (box bounds, CLI options)
- print_formula: Formula -> canonical, re-parseable text
- SourceFormula / load_source: formula text with its origin

Syntax summary:
    x < y, x <= y, x = y, x != y, x > y, x >= y   comparisons of linear terms
    D[t^2 + 1](x - 3*y)                           divisibility by a polynomial
    ~, /\\, \\/, parentheses                       connectives (~ binds tightest)
    E x. phi, A x. phi                            unbounded quantifiers
    Eb z <= t - 1 . phi, Ab z <= 2t . phi         quantifiers over [0, bound]

Coefficients are integer polynomials in the parameter t written as
monomials (`2t^2*x`) or parenthesized sums (`(t + 1)*x`, `(2t)*(x + y)`).
A quantifier body extends as far right as possible. `t` and the keywords
E, A, Eb, Ab, D cannot be used as variable names. Lines starting with `#`
are comments.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Union

from lark import Lark, Token, Transformer
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from app.logic.formula import (
    FALSE,
    TRUE,
    And,
    BExists,
    BForall,
    Div,
    Eq,
    Exists,
    FalseFormula,
    Forall,
    Formula,
    LinearTerm,
    Lt,
    Not,
    Or,
    TrueFormula,
    VarId,
    free_variables,
    ge,
    gt,
    le,
)
from app.logic.poly import Polynomial, format_polynomial, is_monomial


class ParseError(Exception):
    """Raised when formula text does not conform to the grammar.

    Attributes:
        message: Human-readable description.
        line: 1-based line of the offending input, when known.
        column: 1-based column of the offending input, when known.
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None) -> None:
        self.message = message
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnknownVariableError(ParseError):
    """Raised in strict mode for free variables that were not declared."""


GRAMMAR = r"""
start: or_expr

poly: sum

or_expr: (and_expr "\\/")* (and_expr | and_q)
and_expr: unary ("/\\" unary)*
and_q: (unary "/\\")* (quant | neg_q)
neg_q: "~" (quant | neg_q)

?unary: "~" unary                           -> negation
      | "(" or_expr ")"
      | atom

quant: "E" VAR "." or_expr                  -> exists
     | "A" VAR "." or_expr                  -> forall
     | "Eb" VAR "<=" sum "." or_expr        -> bexists
     | "Ab" VAR "<=" sum "." or_expr        -> bforall

atom: sum "<" sum                           -> lt
    | sum "<=" sum                          -> le
    | sum ">" sum                           -> gt
    | sum ">=" sum                          -> ge
    | sum "=" sum                           -> eq
    | sum "!=" sum                          -> ne
    | "D" "[" sum "]" "(" sum ")"           -> divides

sum: first rest*
first: product                              -> pos
     | "-" product                          -> neg
rest: "+" product                           -> pos
    | "-" product                           -> neg

product: coeff "*" VAR                      -> scaled_var
       | coeff "*" "(" sum ")"              -> scaled_sum
       | VAR                                -> var
       | monomial                           -> constant
       | "(" sum ")"                        -> paren

?coeff: monomial
      | "(" sum ")"

monomial: INT                               -> int_monomial
        | [INT] "t" ["^" INT]               -> t_monomial

VAR: /[A-Za-z_][A-Za-z0-9_]*('[0-9]+)?/
INT: /[0-9]+/
COMMENT: /#[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

_parser = Lark(GRAMMAR, start=["start", "poly"], parser="earley", lexer="basic")

_KEYWORDS = frozenset({"E", "A", "Eb", "Ab", "D"})


def variable_id(text: str, line: Optional[int] = None, column: Optional[int] = None) -> VarId:
    """VarId for a printed name such as `x` or `z'3`."""
    name, _, serial = text.strip().partition("'")
    if name == "t":
        raise ParseError("'t' is the parameter and cannot be used as a variable", line, column)
    if name in _KEYWORDS:
        raise ParseError(f"'{name}' is a keyword and cannot be used as a variable", line, column)
    if not name or not (name[0].isalpha() or name[0] == "_") or not name.replace("_", "a").isalnum():
        raise ParseError(f"Not a variable name: {text!r}", line, column)
    if serial and not serial.isdigit():
        raise ParseError(f"Not a variable name: {text!r}", line, column)
    return VarId(name, int(serial) if serial else 0)


def _coefficient(value: Union[Polynomial, LinearTerm]) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    if not value.is_constant:
        raise ParseError("Coefficients, moduli and bounds must not contain variables")
    return value.constant


class _FormulaBuilder(Transformer):
    """Turns the lark parse tree into Formula nodes with normalized terms."""

    def VAR(self, token: Token) -> VarId:
        return variable_id(str(token), token.line, token.column)

    def start(self, children: list) -> Formula:
        return children[0]

    def poly(self, children: list) -> Polynomial:
        return _coefficient(children[0])

    def or_expr(self, children: list) -> Formula:
        return children[0] if len(children) == 1 else Or(tuple(children))

    def and_expr(self, children: list) -> Formula:
        return children[0] if len(children) == 1 else And(tuple(children))

    and_q = and_expr

    def neg_q(self, children: list) -> Formula:
        return Not(children[0])

    negation = neg_q

    def exists(self, children: list) -> Formula:
        return Exists(children[0], children[1])

    def forall(self, children: list) -> Formula:
        return Forall(children[0], children[1])

    def bexists(self, children: list) -> Formula:
        return BExists(children[0], _coefficient(children[1]), children[2])

    def bforall(self, children: list) -> Formula:
        return BForall(children[0], _coefficient(children[1]), children[2])

    def lt(self, children: list) -> Formula:
        return Lt(children[0] - children[1])

    def le(self, children: list) -> Formula:
        return le(children[0], children[1])

    def gt(self, children: list) -> Formula:
        return gt(children[0], children[1])

    def ge(self, children: list) -> Formula:
        return ge(children[0], children[1])

    def eq(self, children: list) -> Formula:
        term = children[0] - children[1]
        return TRUE if term.is_zero else Eq(term)

    def ne(self, children: list) -> Formula:
        term = children[0] - children[1]
        return FALSE if term.is_zero else Not(Eq(term))

    def divides(self, children: list) -> Formula:
        return Div(_coefficient(children[0]), children[1])

    def sum(self, children: list) -> LinearTerm:
        total = LinearTerm()
        for term in children:
            total = total + term
        return total

    def pos(self, children: list) -> LinearTerm:
        return children[0]

    def neg(self, children: list) -> LinearTerm:
        return -children[0]

    def scaled_var(self, children: list) -> LinearTerm:
        return LinearTerm.variable(children[1]).scale(_coefficient(children[0]))

    def scaled_sum(self, children: list) -> LinearTerm:
        return children[1].scale(_coefficient(children[0]))

    def var(self, children: list) -> LinearTerm:
        return LinearTerm.variable(children[0])

    def constant(self, children: list) -> LinearTerm:
        return LinearTerm.const(children[0])

    def paren(self, children: list) -> LinearTerm:
        return children[0]

    def int_monomial(self, children: list) -> Polynomial:
        return Polynomial.constant(int(children[0]))

    def t_monomial(self, children: list) -> Polynomial:
        coefficient, exponent = children
        return Polynomial.monomial(
            int(coefficient) if coefficient is not None else 1,
            int(exponent) if exponent is not None else 1,
        )


def parse(text: str, strict: bool = False, declared: Optional[Iterable[str]] = None) -> Formula:
    """Parse formula text into a Formula.

    Args:
        text: Formula source.
        strict: Reject free variables that are not in `declared`.
        declared: Printable names of the allowed free variables.

    Returns:
        The parsed formula; `0 = 0` and `0 != 0` become TRUE and FALSE.

    Raises:
        ParseError: On syntax errors, with line and column.
        UnknownVariableError: In strict mode, for undeclared free variables.
    """
    try:
        tree = _parser.parse(text, start="start")
    except UnexpectedEOF as e:
        raise ParseError("Unexpected end of input") from e
    except UnexpectedInput as e:
        raise ParseError(f"Unexpected input {_context(text, e)!r}", e.line, e.column) from e
    try:
        formula = _FormulaBuilder().transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, ParseError):
            raise e.orig_exc from None
        raise
    if strict:
        allowed = set(declared or ())
        unknown = sorted(str(v) for v in free_variables(formula) if str(v) not in allowed)
        if unknown:
            raise UnknownVariableError(f"Undeclared variables: {', '.join(unknown)}")
    return formula


def parse_polynomial(text: str) -> Polynomial:
    """Parse a variable-free sum such as `2t^2 + t` into a Polynomial."""
    try:
        tree = _parser.parse(text, start="poly")
    except UnexpectedEOF as e:
        raise ParseError("Unexpected end of input") from e
    except UnexpectedInput as e:
        raise ParseError(f"Unexpected input {_context(text, e)!r}", e.line, e.column) from e
    try:
        return _FormulaBuilder().transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, ParseError):
            raise e.orig_exc from None
        raise


def _context(text: str, error: UnexpectedInput) -> str:
    pos = getattr(error, "pos_in_stream", None)
    if pos is None:
        return ""
    return text[pos : pos + 10]


# --- Printing ---


def _summand(coefficient: Polynomial, var: Optional[VarId]) -> str:
    """Render a summand whose coefficient has a positive leading coefficient."""
    if var is None:
        return format_polynomial(coefficient)
    if coefficient.coeffs == (1,):
        return str(var)
    if is_monomial(coefficient):
        return f"{format_polynomial(coefficient)}*{var}"
    return f"({format_polynomial(coefficient)})*{var}"


def _split(term: LinearTerm) -> tuple[list[str], list[str]]:
    positive: list[str] = []
    negative: list[str] = []
    parts: list[tuple[Polynomial, Optional[VarId]]] = list((p, v) for v, p in term.coeffs)
    if not term.constant.is_zero:
        parts.append((term.constant, None))
    for coefficient, var in parts:
        if coefficient.leading_coefficient > 0:
            positive.append(_summand(coefficient, var))
        else:
            negative.append(_summand(-coefficient, var))
    return positive, negative


def _side(summands: list[str]) -> str:
    return " + ".join(summands) if summands else "0"


def format_term(term: LinearTerm) -> str:
    """Render a term as a single re-parseable sum, e.g. `x - 3*y`."""
    positive, negative = _split(term)
    if not negative:
        return _side(positive)
    rest = _side(negative)
    if len(negative) > 1 or " " in rest:
        rest = f"({rest})"
    if not positive:
        return f"-{rest}"
    return f"{_side(positive)} - {rest}"


def _comparison(term: LinearTerm, op: str) -> str:
    positive, negative = _split(term)
    return f"{_side(positive)} {op} {_side(negative)}"


def _child(phi: Formula) -> str:
    text = print_formula(phi)
    if isinstance(phi, (And, Or, Exists, Forall, BExists, BForall)):
        return f"({text})"
    return text


def print_formula(phi: Formula) -> str:
    """Deterministic text of a formula that parses back to an alpha-equivalent one."""
    match phi:
        case TrueFormula():
            return "0 = 0"
        case FalseFormula():
            return "0 != 0"
        case Lt(term):
            return _comparison(term, "<")
        case Eq(term):
            return _comparison(term, "=")
        case Div(modulus, term):
            return f"D[{format_polynomial(modulus)}]({format_term(term)})"
        case Not(Eq(term)):
            return _comparison(term, "!=")
        case Not(arg):
            return f"~({print_formula(arg)})"
        case And(args):
            return " /\\ ".join(_child(a) for a in args) if args else "0 = 0"
        case Or(args):
            return " \\/ ".join(_child(a) for a in args) if args else "0 != 0"
        case Exists(var, body):
            return f"E {var}. {print_formula(body)}"
        case Forall(var, body):
            return f"A {var}. {print_formula(body)}"
        case BExists(var, bound, body):
            return f"Eb {var} <= {format_polynomial(bound)} . {print_formula(body)}"
        case BForall(var, bound, body):
            return f"Ab {var} <= {format_polynomial(bound)} . {print_formula(body)}"
    raise TypeError(f"Not a formula: {phi!r}")


# --- Sources ---


@dataclass(frozen=True)
class SourceFormula:
    """Formula text plus where it came from (a path or `<inline>`)."""

    text: str
    origin: str = "<inline>"

    def parse(self, strict: bool = False, declared: Optional[Iterable[str]] = None) -> Formula:
        return parse(self.text, strict=strict, declared=declared)


def load_source(path: Union[str, Path]) -> SourceFormula:
    path = Path(path)
    return SourceFormula(path.read_text(encoding="utf-8"), str(path))
