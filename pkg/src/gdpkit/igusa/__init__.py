"""Igusa zeta functions from root counts, and integral forms of generators."""
from .fit import FitResult, PrimeFit, candidate_grid, fit_prime, fit_rational, uniformity_report, zeta_coefficients
from .naturality import NaturalityRow, verify_naturality
from .report import CountReport, cmd_count

__all__ = [
    "CountReport",
    "FitResult",
    "NaturalityRow",
    "PrimeFit",
    "candidate_grid",
    "cmd_count",
    "fit_prime",
    "fit_rational",
    "uniformity_report",
    "verify_naturality",
    "zeta_coefficients",
]
