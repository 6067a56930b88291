"""Q_p as an exact model: elements, residue rings, measures, counts, characters."""
from .character import Character, char_sum, frac_p, gauss_sum, residue_domain
from .cyclotomic import Cyclo, cyclotomic_poly
from .element import A_set, PadicElement, ResidueRingElem, angular_component, cross, rf_modulus
from .fourier import StepFunction, fourier_step
from .measure import ball_measure, geometric_sum, measure, res_term
from .roots import IntPoly, count_roots_brute, count_roots_levels, count_roots_mod
from .structure import QpStructure, eval_formula_model

__all__ = [
    "A_set",
    "Character",
    "Cyclo",
    "IntPoly",
    "PadicElement",
    "QpStructure",
    "ResidueRingElem",
    "StepFunction",
    "angular_component",
    "ball_measure",
    "char_sum",
    "count_roots_brute",
    "count_roots_levels",
    "count_roots_mod",
    "cross",
    "cyclotomic_poly",
    "eval_formula_model",
    "fourier_step",
    "frac_p",
    "gauss_sum",
    "geometric_sum",
    "measure",
    "res_term",
    "residue_domain",
    "rf_modulus",
]
