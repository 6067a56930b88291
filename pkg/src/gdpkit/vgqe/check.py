"""Brute-force equivalence checks in Q_p.

Free value-group variables range over a window [lo, hi] (plus +inf for
vginf variables), residue-ring variables over all of RF_n, and field
parameters over (valuation, unit mod p^8) worlds.  Value-group quantifiers
in the formulas themselves are decided exactly by the evaluator.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

from ..formula import formulas as F
from ..formula.arith import vp
from ..formula.evaluate import compile_formula
from ..formula.terms import AcParam, OrdParam, Var
from ..formula.transform import atoms, free_vars, params, rf_moduli
from ..padic.structure import QpStructure

PRECISION = 8


@dataclass
class CheckReport:
    p: int
    assignments: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self):
        return {"p": self.p, "assignments": self.assignments, "ok": self.ok, "mismatches": self.mismatches[:5]}


def max_ord(fs, p: int) -> int:
    ns = set()
    for f in fs:
        ns |= rf_moduli(f)
    return max((vp(n, p) for n in ns), default=0)


def default_window(fs, p: int) -> tuple:
    return (-5, max_ord(fs, p) + 5)


def _labels(fs) -> dict:
    """label -> 'ord', 'ac' or 'both'."""
    out = {}
    for f in fs:
        for prm in params(f):
            kind = "ord" if isinstance(prm, OrdParam) else "ac"
            label = prm.label
            out[label] = kind if out.get(label, kind) == kind else "both"
    return out


def assignments(fs, p: int, window: Optional[tuple] = None, precision: int = PRECISION):
    """All environments over the free symbols of the formulas fs."""
    lo, hi = window or default_window(fs, p)
    vs = sorted({v for f in fs for v in free_vars(f)}, key=lambda v: v.name)
    axes = []
    for v in vs:
        if v.sort.is_rf:
            axes.append((v, list(range(p ** (vp(v.sort.n, p) + 1)))))
        elif v.sort.kind == "vginf":
            axes.append((v, list(range(lo, hi + 1)) + [math.inf]))
        else:
            axes.append((v, list(range(lo, hi + 1))))
    for label, kind in sorted(_labels(fs).items()):
        if kind == "ord":
            axes.append((label, list(range(lo, hi + 1)) + [math.inf]))
        else:
            k = min(precision, max_ord(fs, p) + 1)
            units = [u for u in range(p**k) if u % p]
            axes.append((label, [(v, u) for v in range(lo, hi + 1) for u in units] + [(math.inf, 0)]))
    for combo in itertools.product(*[vals for _, vals in axes]):
        yield {(k.name if isinstance(k, Var) else k): val for (k, _), val in zip(axes, combo)}


def check_equivalent(
    f: F.Formula,
    g: F.Formula,
    p: int,
    window: Optional[tuple] = None,
    limit: int = 200_000,
    preds=None,
    nested_window: Optional[tuple] = None,
) -> CheckReport:
    """Compare f and g on every assignment of their free symbols.

    Nested value-group quantifiers (only the outer ones) range over
    nested_window, by default the assignment window widened by 12.
    """
    lo, hi = window or default_window([f, g], p)
    st = QpStructure(p, preds, vg_window=nested_window or (lo - 12, hi + 12))
    cf, cg = compile_formula(f, st), compile_formula(g, st)
    rep = CheckReport(p)
    for env in assignments([f, g], p, (lo, hi)):
        rep.assignments += 1
        if rep.assignments > limit:
            break
        a, b = cf(env), cg(env)
        if a != b:
            rep.mismatches.append({"env": {k: str(v) for k, v in env.items()}, "lhs": a, "rhs": b})
            if len(rep.mismatches) >= 5:
                break
    return rep
