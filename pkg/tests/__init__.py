"""Test suite for ppres.

This package contains tests for:
- Polynomials, formulas and the parser
- Normalization, bounding and quantifier-free elimination
- The classical oracle, grid checks and family counting
- The command line, the HTTP service, configuration and logging
- The regression corpus
"""
