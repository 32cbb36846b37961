"""Services built on the engine.

This module contains:
- oracle: classical decision procedure and finite-grid equivalence checks
- counting: family counts and empirical quasi-polynomial fits
- workers: bounded thread pool honoring PPRES_THREADS
"""

from app.services.counting import count_family, fit_quasi_polynomial
from app.services.oracle import check_equiv, classical_cooper_decide

__all__ = [
    "check_equiv",
    "classical_cooper_decide",
    "count_family",
    "fit_quasi_polynomial",
]
