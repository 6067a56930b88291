"""Structural operations: free variables, substitution, normal forms."""
from __future__ import annotations

import itertools
from typing import Callable, Iterable

from ..errors import SortError, UnboundVariable
from . import formulas as F
from .sorts import Sort
from .terms import (
    AcParam,
    Cross,
    OrdParam,
    Res,
    RFLit,
    RFOp,
    Var,
    VGTerm,
    rf_leaves,
    rf_map,
    rf_sort,
)


# traversal -------------------------------------------------------------------


def atoms(f) -> list:
    out = []

    def go(g):
        if F.is_atom(g):
            out.append(g)
        elif isinstance(g, F.Not):
            go(g.arg)
        elif isinstance(g, (F.And, F.Or)):
            for a in g.args:
                go(a)
        elif isinstance(g, F.Implies):
            go(g.lhs)
            go(g.rhs)
        elif isinstance(g, (F.Exists, F.Forall)):
            go(g.body)

    go(f)
    return out


def _vg_terms_of_atom(a) -> list:
    if isinstance(a, (F.Cmp, F.Cong)):
        return [a.lhs, a.rhs]
    out = []
    for t in _rf_terms_of_atom(a):
        out.extend(c.arg for c in _crosses(t))
    return out


def _rf_terms_of_atom(a) -> list:
    if isinstance(a, F.RFEq):
        return [a.lhs, a.rhs]
    if isinstance(a, F.AMem):
        return [a.arg]
    if isinstance(a, F.Pred):
        return list(a.args)
    return []


def _crosses(t) -> list:
    if isinstance(t, Cross):
        return [t]
    if isinstance(t, RFOp):
        return [c for a in t.args for c in _crosses(a)]
    if isinstance(t, Res):
        return _crosses(t.arg)
    return []


def atom_vars(a) -> set:
    out = set()
    for t in _vg_terms_of_atom(a):
        out |= t.variables()
    for t in _rf_terms_of_atom(a):
        out |= {x for x in rf_leaves(t) if isinstance(x, Var)}
    return out


def atom_params(a) -> set:
    out = set()
    for t in _vg_terms_of_atom(a):
        out |= t.params()
    for t in _rf_terms_of_atom(a):
        out |= {x for x in rf_leaves(t) if isinstance(x, AcParam)}
    return out


def free_vars(f) -> set:
    if F.is_atom(f):
        return atom_vars(f)
    if isinstance(f, F.Const):
        return set()
    if isinstance(f, F.Not):
        return free_vars(f.arg)
    if isinstance(f, (F.And, F.Or)):
        out = set()
        for a in f.args:
            out |= free_vars(a)
        return out
    if isinstance(f, F.Implies):
        return free_vars(f.lhs) | free_vars(f.rhs)
    if isinstance(f, (F.Exists, F.Forall)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def all_vars(f) -> set:
    """Free and bound variables."""
    out = set()
    for a in atoms(f):
        out |= atom_vars(a)

    def go(g):
        if isinstance(g, (F.Exists, F.Forall)):
            out.add(g.var)
            go(g.body)
        elif isinstance(g, F.Not):
            go(g.arg)
        elif isinstance(g, (F.And, F.Or)):
            for a in g.args:
                go(a)
        elif isinstance(g, F.Implies):
            go(g.lhs)
            go(g.rhs)

    go(f)
    return out


def params(f) -> set:
    out = set()
    for a in atoms(f):
        out |= atom_params(a)
    return out


def ord_primes(f) -> set:
    out = set()
    for a in atoms(f):
        for t in _vg_terms_of_atom(a):
            out |= t.ord_primes()
    return out


def rf_moduli(f) -> set:
    """Indices n of all residue-ring sorts appearing in f."""
    out = set()

    def term(t):
        out.add(rf_sort(t).n)
        if isinstance(t, RFOp):
            for a in t.args:
                term(a)
        elif isinstance(t, Res):
            term(t.arg)

    def go(g):
        if F.is_atom(g):
            for t in _rf_terms_of_atom(g):
                term(t)
            if isinstance(g, F.AMem):
                out.add(g.n)
        elif isinstance(g, F.Not):
            go(g.arg)
        elif isinstance(g, (F.And, F.Or)):
            for a in g.args:
                go(a)
        elif isinstance(g, F.Implies):
            go(g.lhs)
            go(g.rhs)
        elif isinstance(g, (F.Exists, F.Forall)):
            if g.var.sort.is_rf:
                out.add(g.var.sort.n)
            go(g.body)

    go(f)
    return out


def cross_terms(f) -> list:
    out = []
    for a in atoms(f):
        for t in _rf_terms_of_atom(a):
            for c in _crosses(t):
                if c not in out:
                    out.append(c)
    return out


def quantifiers(f) -> list:
    """All quantified variables, outermost first."""
    out = []

    def go(g):
        if isinstance(g, (F.Exists, F.Forall)):
            out.append(g.var)
            go(g.body)
        elif isinstance(g, F.Not):
            go(g.arg)
        elif isinstance(g, (F.And, F.Or)):
            for a in g.args:
                go(a)
        elif isinstance(g, F.Implies):
            go(g.lhs)
            go(g.rhs)

    go(f)
    return out


def vg_quantifier_count(f) -> int:
    return sum(1 for v in quantifiers(f) if v.sort.is_vg)


def is_quantifier_free(f) -> bool:
    return not quantifiers(f)


# atom-level rewriting ------------------------------------------------------------


def map_atoms(f, fn: Callable) -> F.Formula:
    """Rebuild f with each atom replaced by fn(atom) (a formula)."""
    if F.is_atom(f):
        return fn(f)
    if isinstance(f, F.Const):
        return f
    if isinstance(f, F.Not):
        return F.neg(map_atoms(f.arg, fn))
    if isinstance(f, F.And):
        return F.conj(*(map_atoms(a, fn) for a in f.args))
    if isinstance(f, F.Or):
        return F.disj(*(map_atoms(a, fn) for a in f.args))
    if isinstance(f, F.Implies):
        return F.Implies(map_atoms(f.lhs, fn), map_atoms(f.rhs, fn))
    if isinstance(f, F.Exists):
        return F.Exists(f.var, map_atoms(f.body, fn))
    if isinstance(f, F.Forall):
        return F.Forall(f.var, map_atoms(f.body, fn))
    raise TypeError(f"not a formula: {f!r}")


def map_terms_in_atom(a, vg_fn: Callable, rf_leaf_fn: Callable = lambda t: t):
    """Apply vg_fn to every VG term (including cross arguments) of an atom."""
    if isinstance(a, F.Cmp):
        return F.Cmp(a.op, vg_fn(a.lhs), vg_fn(a.rhs))
    if isinstance(a, F.Cong):
        return F.Cong(a.d, vg_fn(a.lhs), vg_fn(a.rhs))
    rf = lambda t: rf_map(t, rf_leaf_fn, vg_fn)  # noqa: E731
    if isinstance(a, F.RFEq):
        return F.RFEq(rf(a.lhs), rf(a.rhs))
    if isinstance(a, F.AMem):
        return F.AMem(a.n, rf(a.arg))
    if isinstance(a, F.Pred):
        return F.Pred(a.name, tuple(rf(t) for t in a.args))
    raise TypeError(f"not an atom: {a!r}")


# substitution -------------------------------------------------------------------


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    stem = base.rstrip("0123456789").rstrip("_") or base
    for i in itertools.count(1):
        cand = f"{stem}_{i}"
        if cand not in avoid:
            return cand


def _term_vars(t) -> set:
    if isinstance(t, VGTerm):
        return t.variables()
    return {x for x in rf_leaves(t) if isinstance(x, Var)} | {
        v for c in _crosses(t) for v in c.arg.variables()
    }


def _subst_atom(a, var: Var, term):
    if var.sort.is_vg:
        return map_terms_in_atom(a, lambda t: t.substitute(var, term))
    return map_terms_in_atom(a, lambda t: t, lambda leaf: term if leaf == var else leaf)


def substitute(f, var: Var, term) -> F.Formula:
    """Capture-avoiding substitution of term for the free variable var."""
    if isinstance(term, int):
        term = VGTerm.lit(term)
    if isinstance(term, (Var, OrdParam)) and var.sort.is_vg:
        term = VGTerm.var(term)
    if var.sort.is_vg:
        if not isinstance(term, VGTerm):
            raise SortError(f"cannot substitute {term} for value-group variable {var.name}")
        if term.inf and var.sort.kind == "vg":
            raise SortError(f"cannot substitute +inf for {var.name}:vg")
    else:
        if isinstance(term, VGTerm) or rf_sort(term) != var.sort:
            raise SortError(f"cannot substitute {term} for {var.name}:{var.sort}")
    tv = _term_vars(term)
    return _subst(f, var, term, tv)


def _subst(f, var, term, tv):
    if F.is_atom(f):
        return _subst_atom(f, var, term) if var in atom_vars(f) else f
    if isinstance(f, F.Const):
        return f
    if isinstance(f, F.Not):
        return F.Not(_subst(f.arg, var, term, tv))
    if isinstance(f, F.And):
        return F.And(tuple(_subst(a, var, term, tv) for a in f.args))
    if isinstance(f, F.Or):
        return F.Or(tuple(_subst(a, var, term, tv) for a in f.args))
    if isinstance(f, F.Implies):
        return F.Implies(_subst(f.lhs, var, term, tv), _subst(f.rhs, var, term, tv))
    if isinstance(f, (F.Exists, F.Forall)):
        if f.var == var or var not in free_vars(f.body):
            return f
        body, bv = f.body, f.var
        if any(v.name == bv.name for v in tv):
            avoid = {v.name for v in all_vars(f.body)} | {v.name for v in tv} | {var.name}
            nv = Var(fresh_name(bv.name, avoid), bv.sort)
            body = _subst(body, bv, VGTerm.var(nv) if bv.sort.is_vg else nv, {nv})
            bv = nv
        body = _subst(body, var, term, tv)
        return type(f)(bv, body)
    raise TypeError(f"not a formula: {f!r}")


def substitute_many(f, mapping: dict) -> F.Formula:
    for v, t in mapping.items():
        f = substitute(f, v, t)
    return f


def rename_bound_apart(f, avoid: Iterable[str] = ()) -> F.Formula:
    """Rename bound variables so they are distinct from each other and from free ones."""
    used = {v.name for v in free_vars(f)} | set(avoid)

    def go(g):
        if isinstance(g, (F.Exists, F.Forall)):
            v = g.var
            body = g.body
            if v.name in used:
                nv = Var(fresh_name(v.name, used | {x.name for x in all_vars(body)}), v.sort)
                body = _subst(body, v, VGTerm.var(nv) if v.sort.is_vg else nv, {nv})
                v = nv
            used.add(v.name)
            return type(g)(v, go(body))
        if isinstance(g, F.Not):
            return F.Not(go(g.arg))
        if isinstance(g, F.And):
            return F.And(tuple(go(a) for a in g.args))
        if isinstance(g, F.Or):
            return F.Or(tuple(go(a) for a in g.args))
        if isinstance(g, F.Implies):
            return F.Implies(go(g.lhs), go(g.rhs))
        return g

    return go(f)


def typecheck(f, context: dict | None = None) -> F.Formula:
    """Check that free variables agree with context and that every node is well sorted.

    Node constructors already enforce local sort rules; this pass checks
    variable usage against the context and raises UnboundVariable for
    free variables missing from it (when a context is supplied).
    """
    seen: dict = {}
    for v in all_vars(f):
        if v.name in seen and seen[v.name] != v.sort:
            if not (seen[v.name].is_vg and v.sort.is_vg):
                raise SortError(f"variable {v.name!r} used with sorts {seen[v.name]} and {v.sort}")
        seen[v.name] = v.sort
    if context is not None:
        from .sorts import parse_sort

        ctx = {k: (parse_sort(s) if isinstance(s, str) else s) for k, s in context.items()}
        for v in free_vars(f):
            if v.name not in ctx:
                raise UnboundVariable(v.name)
            if ctx[v.name] != v.sort:
                raise SortError(f"variable {v.name!r} has sort {v.sort}, context says {ctx[v.name]}")
    return f


# normal forms ------------------------------------------------------------------


def _neg_cmp(a: F.Cmp) -> F.Formula:
    if a.op == "<":
        return F.Cmp("<=", a.rhs, a.lhs)
    if a.op == "<=":
        return F.Cmp("<", a.rhs, a.lhs)
    return F.disj(F.Cmp("<", a.lhs, a.rhs), F.Cmp("<", a.rhs, a.lhs))


def nnf(f, positive: bool = True) -> F.Formula:
    """Negation normal form.  Negated comparisons between finite terms are
    rewritten (¬(a<b) becomes b ≤ a); other negated atoms stay literals."""
    if isinstance(f, F.Const):
        return f if positive else F.Const(not f.value)
    if F.is_atom(f):
        if positive:
            return f
        if isinstance(f, F.Cmp):
            # +inf is the maximum of a linear order, so these rewrites stay valid
            return _neg_cmp(f)
        return F.Not(f)
    if isinstance(f, F.Not):
        return nnf(f.arg, not positive)
    if isinstance(f, F.And):
        parts = [nnf(a, positive) for a in f.args]
        return F.conj(*parts) if positive else F.disj(*parts)
    if isinstance(f, F.Or):
        parts = [nnf(a, positive) for a in f.args]
        return F.disj(*parts) if positive else F.conj(*parts)
    if isinstance(f, F.Implies):
        if positive:
            return F.disj(nnf(f.lhs, False), nnf(f.rhs, True))
        return F.conj(nnf(f.lhs, True), nnf(f.rhs, False))
    if isinstance(f, F.Exists):
        return F.Exists(f.var, nnf(f.body, True)) if positive else F.Forall(f.var, nnf(f.body, False))
    if isinstance(f, F.Forall):
        return F.Forall(f.var, nnf(f.body, True)) if positive else F.Exists(f.var, nnf(f.body, False))
    raise TypeError(f"not a formula: {f!r}")


def dnf_clauses(f, limit: int = 200000) -> list[list]:
    """DNF as a list of conjunctions (lists of literals); quantified
    subformulas are treated as opaque literals."""
    g = nnf(f)

    def go(h) -> list[list]:
        if isinstance(h, F.Const):
            return [[]] if h.value else []
        if isinstance(h, F.Or):
            out = []
            for a in h.args:
                out.extend(go(a))
            return out
        if isinstance(h, F.And):
            acc = [[]]
            for a in h.args:
                sub = go(a)
                acc = [x + y for x in acc for y in sub]
                if len(acc) > limit:
                    raise OverflowError("DNF too large")
            return acc
        return [[h]]

    out = []
    seen = set()
    for c in go(g):
        key = frozenset(c)
        if key in seen:
            continue
        seen.add(key)
        dedup = []
        for lit in c:
            if lit not in dedup:
                dedup.append(lit)
        out.append(dedup)
    return out


def dnf(f) -> F.Formula:
    return F.disj(*(F.conj(*c) for c in dnf_clauses(f)))


def normal_form(f, mode: str = "NNF") -> F.Formula:
    mode = mode.upper()
    if mode == "NNF":
        return nnf(f)
    if mode == "DNF":
        return dnf(f)
    raise ValueError(f"unknown normal form {mode!r}")
