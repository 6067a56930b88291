"""Weak orthogonality normal form.

After value-group quantifiers are gone and value-group atoms are pulled out
of residue-ring quantifiers, a formula is a Boolean combination of
Presburger literals and residue-ring conditions.  Its disjunctive form,
grouped by the residue-ring part, is a finite disjunction of Θ ∧ Φ with Θ
pure Presburger and Φ a residue-ring formula in the free residue-ring
variables, angular components and cross terms of Presburger terms.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import UnsupportedAtom
from ..formula import formulas as F
from ..formula.printer import to_text
from ..formula.serialize import formula_from_json, formula_to_json
from ..formula.terms import Cross
from ..formula.transform import atoms, dnf_clauses, quantifiers
from ..presburger.linear import simplify
from .eliminate import Trace, crosses_of, eliminate_all, hoist, is_vg_atom, tidy

SCHEMA_VERSION = 1


def _is_vg_literal(lit) -> bool:
    a = lit.arg if isinstance(lit, F.Not) else lit
    return is_vg_atom(a)


@dataclass
class WeakOrthoForm:
    disjuncts: list  # [(theta, phi)]
    trace: Trace = field(default_factory=Trace)

    def formula(self) -> F.Formula:
        return F.disj(*(F.conj(t, p) for t, p in self.disjuncts))

    def crosses(self) -> list:
        out = []
        for _, phi in self.disjuncts:
            for c in crosses_of(phi):
                if c not in out:
                    out.append(c)
        return out

    def check_invariants(self) -> bool:
        for theta, phi in self.disjuncts:
            if any(not is_vg_atom(a) for a in atoms(theta)) or quantifiers(theta):
                return False
            if any(is_vg_atom(a) for a in atoms(phi)):
                return False
            if any(q.sort.is_vg for q in quantifiers(phi)):
                return False
        return True

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "disjuncts": [
                {
                    "theta": formula_to_json(t),
                    "phi": formula_to_json(p),
                    "theta_text": to_text(t),
                    "phi_text": to_text(p),
                }
                for t, p in self.disjuncts
            ],
            "crosses": [{"n": c.n, "arg": str(c.arg)} for c in self.crosses()],
            "trace": self.trace.to_json(),
        }

    @staticmethod
    def from_json(d) -> "WeakOrthoForm":
        tr = Trace(list(d.get("trace", [])))
        return WeakOrthoForm([(formula_from_json(x["theta"]), formula_from_json(x["phi"])) for x in d["disjuncts"]], tr)

    def __str__(self) -> str:
        if not self.disjuncts:
            return "false"
        return "\n".join(f"[{to_text(t)}]  &  [{to_text(p)}]" for t, p in self.disjuncts)


def weak_ortho_normal_form(f: F.Formula, trace: Trace = None) -> WeakOrthoForm:
    """Equivalent disjunction of (Presburger Θ) ∧ (residue-ring Φ)."""
    trace = trace if trace is not None else Trace()
    for a in atoms(f):
        if not isinstance(a, (F.Cmp, F.Cong, F.RFEq, F.AMem, F.Pred)):
            raise UnsupportedAtom(f"unsupported atom {a!r}")
    g = eliminate_all(f, trace)
    g = hoist(g)
    trace.add("separate", "value-group literals pulled out of residue-ring quantifiers")
    groups: dict = {}
    order = []
    for clause in dnf_clauses(g):
        theta = simplify(F.conj(*(l for l in clause if _is_vg_literal(l))))
        if theta == F.FALSE:
            continue
        phi = tidy(F.conj(*(l for l in clause if not _is_vg_literal(l))))
        if phi == F.FALSE:
            continue
        if phi not in groups:
            groups[phi] = []
            order.append(phi)
        groups[phi].append(theta)
    disjuncts = []
    for phi in order:
        theta = simplify(F.disj(*groups[phi]))
        if theta != F.FALSE:
            disjuncts.append((theta, phi))
    trace.add("disjuncts", f"{len(disjuncts)} disjuncts grouped by residue-ring part")
    return WeakOrthoForm(disjuncts, trace)


def cross_arguments(w: WeakOrthoForm) -> list:
    return [c.arg for c in w.crosses() if isinstance(c, Cross)]
