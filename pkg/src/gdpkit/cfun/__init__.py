"""C-class functions, fiber summation, loci and rational zeta functions."""
from .aring import ATerm, as_aterm
from .convert import cfun_to_zeta
from .cterm import CFunction, CharFactor, CountFactor, CTerm, as_cfun, eval_cfun
from .expr import parse_cfun
from .summation import BDD, INT, IVA, locus, sum_fiber, sum_over_interval, sum_over_vg
from .trl import TrlForm, sum_lemma_trl
from .zeta import ZetaRational, as_zeta, clears_with, denominator_certificate, zeta_normalize

__all__ = [
    "ATerm",
    "BDD",
    "CFunction",
    "CTerm",
    "CharFactor",
    "CountFactor",
    "INT",
    "IVA",
    "TrlForm",
    "ZetaRational",
    "as_aterm",
    "as_cfun",
    "as_zeta",
    "cfun_to_zeta",
    "clears_with",
    "denominator_certificate",
    "eval_cfun",
    "locus",
    "parse_cfun",
    "sum_fiber",
    "sum_lemma_trl",
    "sum_over_interval",
    "sum_over_vg",
    "zeta_normalize",
]
