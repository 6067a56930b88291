"""Elimination of value-group quantifiers and weak orthogonal normal forms."""
from .check import CheckReport, check_equivalent
from .eliminate import Trace, eliminate_all, eliminate_vg_exists
from .normal_form import WeakOrthoForm, weak_ortho_normal_form
from .reparam import (
    CeilTerm,
    LinearMap,
    LinearPart,
    ReparamResult,
    approx_linearize,
    bound_rf_function,
    check_fiber_identity,
    reparameterize_linear,
    sandwich_holds,
)

__all__ = [
    "CeilTerm",
    "CheckReport",
    "LinearMap",
    "LinearPart",
    "ReparamResult",
    "Trace",
    "WeakOrthoForm",
    "approx_linearize",
    "bound_rf_function",
    "check_equivalent",
    "check_fiber_identity",
    "eliminate_all",
    "eliminate_vg_exists",
    "reparameterize_linear",
    "sandwich_holds",
    "weak_ortho_normal_form",
]
