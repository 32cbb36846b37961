"""Elimination pipeline.

- normalize: coefficient sign cases, unit coefficient for the eliminated variable
- eliminate: bounded-quantifier replacement of one unbounded quantifier, simplify
- qfree: quantifier-free criterion and full elimination
"""
