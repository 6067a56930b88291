"""Two-sorted formulas over the value group and residue rings."""
from .formulas import (
    FALSE,
    TRUE,
    AMem,
    And,
    Cmp,
    Cong,
    Const,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Pred,
    RFEq,
    conj,
    cong,
    disj,
    eq,
    exists,
    forall,
    ge,
    gt,
    le,
    lt,
    neg,
    rf_var,
    vg_var,
)
from .parser import parse_formula, parse_term
from .printer import to_text
from .serialize import formula_from_json, formula_to_json, term_from_json, term_to_json
from .sorts import BOOL, RF, VG, VGINF, Sort, parse_sort
from .terms import INF, AcParam, Cross, OrdConst, OrdParam, Res, RFLit, RFOp, Var, VGTerm
from .transform import (
    atoms,
    dnf,
    dnf_clauses,
    free_vars,
    nnf,
    normal_form,
    substitute,
    typecheck,
    vg_quantifier_count,
)
