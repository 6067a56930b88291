"""Cooper's quantifier elimination for Presburger arithmetic.

The constants ord(p) are ordinary free symbols here: quantifier
elimination is unaffected by adding constant symbols, and the only fact
used about them during simplification is ord(p) >= 0.
"""
from __future__ import annotations

from itertools import product
from math import gcd

from ..errors import NotPresburger
from ..formula import formulas as F
from ..formula.arith import lcm
from ..formula.sorts import VG
from ..formula.terms import INF, OrdParam, Var, VGTerm
from ..formula.transform import atoms, free_vars, nnf
from .linear import canon_literal, literal_to_formula, require_presburger, simplify


def _subst_inf(f, sym) -> F.Formula:
    """Replace the VG∞ symbol sym by +inf (any term containing it becomes +inf)."""

    def atom(a):
        if isinstance(a, (F.Cmp, F.Cong)):
            l = INF if a.lhs.coeff(sym) else a.lhs
            r = INF if a.rhs.coeff(sym) else a.rhs
            if not (l.inf or r.inf):
                return a
            if isinstance(a, F.Cong):
                return F.FALSE
            if l.inf and r.inf:
                return F.Const(a.op in ("=", "<="))
            if l.inf:
                return F.FALSE
            return F.Const(a.op != "=")
        return a

    from ..formula.transform import map_atoms

    return map_atoms(f, atom)


def _inf_symbols(f) -> list:
    out = set()
    for a in atoms(f):
        if isinstance(a, (F.Cmp, F.Cong)):
            for t in (a.lhs, a.rhs):
                for k, _ in t.coeffs:
                    if isinstance(k, OrdParam) or (isinstance(k, Var) and k.sort.kind == "vginf"):
                        out.add(k)
    return sorted(out, key=lambda k: str(k))


def pres_qe(f: F.Formula) -> F.Formula:
    """Quantifier-free equivalent of a Presburger formula."""
    require_presburger(f)
    fv = free_vars(f)
    syms = [s for s in _inf_symbols(f) if isinstance(s, OrdParam) or s in fv]
    if not syms:
        return simplify(_qe(f))
    out = []
    for pattern in product((True, False), repeat=len(syms)):
        g = f
        guard = []
        for s, is_inf in zip(syms, pattern):
            if is_inf:
                g = _subst_inf(g, s)
                guard.append(F.Cmp("=", VGTerm.var(s), INF))
            else:
                guard.append(F.Cmp("<", VGTerm.var(s), INF))
        out.append(F.conj(*guard, simplify(_qe(g))))
    return F.disj(*out)


def _qe(f) -> F.Formula:
    if isinstance(f, F.Const) or F.is_atom(f):
        return f
    if isinstance(f, F.Not):
        return F.neg(_qe(f.arg))
    if isinstance(f, F.And):
        return F.conj(*(_qe(a) for a in f.args))
    if isinstance(f, F.Or):
        return F.disj(*(_qe(a) for a in f.args))
    if isinstance(f, F.Implies):
        return F.disj(F.neg(_qe(f.lhs)), _qe(f.rhs))
    if isinstance(f, F.Exists):
        body = _qe(f.body)
        return _exists_vg(f.var, body)
    if isinstance(f, F.Forall):
        body = _qe(f.body)
        return simplify(F.neg(_exists_vg(f.var, F.neg(body))))
    raise TypeError(f"not a formula: {f!r}")


def _exists_vg(v: Var, body) -> F.Formula:
    if v.sort.kind == "vginf":
        finite = Var(v.name, VG)
        at_inf = _subst_inf(body, v)
        from ..formula.transform import substitute

        body_f = substitute(body, v, VGTerm.var(finite))
        return F.disj(simplify(at_inf), eliminate_exists(finite, body_f))
    return eliminate_exists(v, body)


# --- core elimination on quantifier-free input -----------------------------------


def eliminate_exists(v: Var, phi: F.Formula) -> F.Formula:
    """∃v φ for quantifier-free Presburger φ."""
    phi = simplify(nnf(phi))
    if isinstance(phi, F.Or):
        return F.disj(*(eliminate_exists(v, a) for a in phi.args))
    if v not in free_vars(phi):
        return phi
    conjuncts = list(phi.args) if isinstance(phi, F.And) else [phi]
    outside = [c for c in conjuncts if v not in free_vars(c)]
    inside = [c for c in conjuncts if v in free_vars(c)]
    tree = _to_tree(F.conj(*inside), v)
    res = _eliminate_tree(v, tree)
    return simplify(F.conj(*outside, res))


def _to_tree(f, v):
    """Internal tree: ('and', [..]) | ('or', [..]) | ('lit', canon) | ('f', formula without v)."""
    if isinstance(f, F.Const):
        return ("f", f)
    if isinstance(f, (F.And, F.Or)):
        return ("and" if isinstance(f, F.And) else "or", [_to_tree(a, v) for a in f.args])
    if v not in free_vars(f):
        return ("f", f)
    c = canon_literal(f)
    if c is None:
        if isinstance(f, F.Not) and isinstance(f.arg, F.Cmp) and f.arg.op == "=":
            t = f.arg.rhs - f.arg.lhs
            return ("or", [("lit", ("lt", t)), ("lit", ("lt", -t))])
        raise NotPresburger(f"unsupported literal {f}")
    return ("lit", c)


def _tree_lits(tree, out):
    if tree[0] == "lit":
        out.append(tree[1])
    elif tree[0] in ("and", "or"):
        for t in tree[1]:
            _tree_lits(t, out)
    return out


def _lit_term(lit):
    return lit[1] if lit[0] in ("lt", "eq") else lit[2]


def _eliminate_tree(v, tree) -> F.Formula:
    lits = _tree_lits(tree, [])
    if not lits:
        return _tree_to_formula(tree)
    # equality shortcut on a top-level conjunct
    top = tree[1] if tree[0] == "and" else [tree]
    for t in top:
        if t[0] == "lit" and t[1][0] == "eq" and t[1][1].coeff(v):
            return _eliminate_by_equality(v, tree, t[1])
    delta = 1
    for lit in lits:
        a = _lit_term(lit).coeff(v)
        if a:
            delta = lcm(delta, abs(a))
    # scale so that every coefficient of v is ±delta, then rename delta*v to v
    scaled = _map_tree(tree, lambda lit: _scale_lit(lit, v, delta))
    if delta > 1:
        scaled = ("and", [scaled, ("lit", ("dvd", delta, VGTerm.var(v)))])
    lits = _tree_lits(scaled, [])
    D = 1
    lower, upper = [], []
    for lit in lits:
        t = _lit_term(lit)
        a = t.coeff(v)
        if not a:
            continue
        rest = t.drop(v)
        if lit[0] in ("dvd", "ndvd"):
            D = lcm(D, lit[1])
        elif lit[0] == "lt":
            (lower if a > 0 else upper).append(-rest if a > 0 else rest)
        else:  # eq: v = -rest (a=1) or v = rest (a=-1)
            val = -rest if a > 0 else rest
            lower.append(val - 1)
            upper.append(val + 1)
    use_lower = len(lower) <= len(upper)
    bounds = _dedup(lower if use_lower else upper)
    out = []
    inf_tree = _map_tree(scaled, lambda lit: _at_infinity(lit, v, -1 if use_lower else 1))
    for j in range(1, D + 1):
        out.append(_tree_to_formula(_subst_tree(inf_tree, v, VGTerm.lit(j))))
    for b in bounds:
        for j in range(1, D + 1):
            val = b + j if use_lower else b - j
            out.append(_tree_to_formula(_subst_tree(scaled, v, val)))
    return F.disj(*out)


def _dedup(xs):
    out = []
    for x in xs:
        if x not in out:
            out.append(x)
    return out


def _eliminate_by_equality(v, tree, eqlit) -> F.Formula:
    t = eqlit[1]
    a = t.coeff(v)
    rest = t.drop(v)
    # a*v + rest = 0  =>  v = -rest/a ; multiply every literal by |a|
    s = abs(a)
    sign = 1 if a > 0 else -1
    value = -rest if sign > 0 else rest  # s*v = value

    def sub(lit):
        kind = lit[0]
        tt = _lit_term(lit)
        c = tt.coeff(v)
        if not c:
            return ("lit", lit)
        r = tt.drop(v)
        new = r.scale(s) + value.scale(c)
        if kind == "dvd" or kind == "ndvd":
            return ("lit", (kind, lit[1] * s, new))
        return ("lit", (kind, new))

    body = _map_tree(tree, sub)
    guard = ("lit", ("dvd", s, value)) if s > 1 else ("f", F.TRUE)
    return _tree_to_formula(("and", [guard, body]))


def _scale_lit(lit, v, delta):
    t = _lit_term(lit)
    a = t.coeff(v)
    if not a:
        return ("lit", lit)
    m = delta // abs(a)
    rest = t.drop(v).scale(m)
    new = rest + VGTerm.var(v).scale(1 if a > 0 else -1)
    if lit[0] in ("dvd", "ndvd"):
        return ("lit", (lit[0], lit[1] * m, new))
    return ("lit", (lit[0], new))


def _at_infinity(lit, v, direction):
    """Literal value as v -> direction*infinity (lt/eq decided, dvd kept)."""
    t = _lit_term(lit)
    a = t.coeff(v)
    if not a or lit[0] in ("dvd", "ndvd"):
        return ("lit", lit)
    if lit[0] == "eq":
        return ("f", F.FALSE)
    return ("f", F.Const((a > 0) == (direction > 0)))


def _map_tree(tree, fn):
    if tree[0] == "lit":
        return fn(tree[1])
    if tree[0] in ("and", "or"):
        return (tree[0], [_map_tree(t, fn) for t in tree[1]])
    return tree


def _subst_tree(tree, v, val: VGTerm):
    def sub(lit):
        kind = lit[0]
        t = _lit_term(lit)
        new = t.substitute(v, val)
        if kind in ("dvd", "ndvd"):
            return ("lit", (kind, lit[1], new))
        return ("lit", (kind, new))

    return _map_tree(tree, sub)


def _tree_to_formula(tree) -> F.Formula:
    if tree[0] == "f":
        return tree[1]
    if tree[0] == "lit":
        return literal_to_formula(tree[1])
    parts = [_tree_to_formula(t) for t in tree[1]]
    return F.conj(*parts) if tree[0] == "and" else F.disj(*parts)
