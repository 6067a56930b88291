"""Elimination of value-group quantifiers in the presence of cross_n terms.

∃y φ is reduced as follows.  Every cross_n(t) whose argument involves y is
split into the case t ∉ [0, ord(n)], where it equals 0, and the case
t ∈ [0, ord(n)].  Without remaining cross terms in y, the residue-ring
parts of φ do not depend on y; they are split off (Shannon expansion) and
∃y is removed from the Presburger remainder by Cooper's method.

Otherwise one bounded term t_1 = a·y + α with a > 0 serves as anchor:
w = t_1 ranges over [0, ord(n_1)], so w is determined by η = cross_N(w) in
A_N ∖ {0} for any multiple N of n_1 (with res_{N,n_1}(η) ≠ 0 cutting w down
to [0, ord(n_1)]).  Atoms in y are multiplied by a and rewritten in w;
other cross terms cross_n(t_i) become a-th roots of cross_{n^a}(a·t_i) in
A_{n^a}, and cross_M(b·w + δ) is expressed with products and exact
quotients of cross_N(w) and crosses of y-free terms in a large enough
residue ring.  Comparisons of w with y-free terms become divisibility in a
residue ring; congruences on w become η = cross_N(r)·ζ^d.  The quantifier
over y turns into a quantifier over η ∈ A_N.  All auxiliary residue-ring
quantifiers range over A-sets.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

from ..errors import UnsupportedAtom
from ..formula import formulas as F
from ..formula.sorts import RF, VG
from ..formula.terms import Cross, Res, RFLit, RFOp, Var, VGTerm, rf_children, rf_pow
from ..formula.transform import _rf_terms_of_atom, _vg_terms_of_atom, atoms, free_vars, fresh_name, all_vars
from ..presburger.cooper import pres_qe
from ..presburger.linear import _normalize_dvd, canon_literal, simplify


@dataclass
class Trace:
    steps: list = field(default_factory=list)

    def add(self, step: str, detail: str):
        self.steps.append({"step": step, "detail": detail})

    def to_json(self):
        return list(self.steps)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# generic rewriting ---------------------------------------------------------------------


def map_formula(f, atom_fn):
    if F.is_atom(f):
        return atom_fn(f)
    if isinstance(f, F.Const):
        return f
    if isinstance(f, F.Not):
        return F.neg(map_formula(f.arg, atom_fn))
    if isinstance(f, F.And):
        return F.conj(*(map_formula(a, atom_fn) for a in f.args))
    if isinstance(f, F.Or):
        return F.disj(*(map_formula(a, atom_fn) for a in f.args))
    if isinstance(f, F.Implies):
        return F.disj(F.neg(map_formula(f.lhs, atom_fn)), map_formula(f.rhs, atom_fn))
    if isinstance(f, (F.Exists, F.Forall)):
        return type(f)(f.var, map_formula(f.body, atom_fn))
    raise TypeError(f"not a formula: {f!r}")


def _map_rf_top(t, fn):
    r = fn(t)
    if r is not None:
        return r
    if isinstance(t, RFOp):
        return RFOp(t.op, tuple(_map_rf_top(a, fn) for a in t.args), t.n)
    if isinstance(t, Res):
        return Res(t.m, t.n, _map_rf_top(t.arg, fn))
    return t


def map_rf_atom(a, fn):
    rf = lambda t: _map_rf_top(t, fn)  # noqa: E731
    if isinstance(a, F.RFEq):
        return F.RFEq(rf(a.lhs), rf(a.rhs))
    if isinstance(a, F.AMem):
        return F.AMem(a.n, rf(a.arg))
    if isinstance(a, F.Pred):
        return F.Pred(a.name, tuple(rf(t) for t in a.args))
    return a


def crosses_of(f) -> list:
    out = []

    def walk(t):
        if isinstance(t, Cross):
            if t not in out:
                out.append(t)
        for c in rf_children(t):
            walk(c)

    for a in atoms(f):
        for t in _rf_terms_of_atom(a):
            walk(t)
    return out


def is_vg_atom(a) -> bool:
    return isinstance(a, (F.Cmp, F.Cong))


def atom_key(a):
    """(key, polarity): atoms with equal keys are equal or complementary."""
    c = canon_literal(a)
    if c is None:
        return (("raw", a), True)
    if c[0] == "lt":
        t = c[1]
        k1, k2 = str(t), str(VGTerm.lit(1) - t)
        return (("lt", min(k1, k2)), k1 <= k2)
    if c[0] == "eq":
        t = c[1]
        return (("eq", min(str(t), str(-t))), True)
    d2, t2 = _normalize_dvd(c[1], c[2])
    return (("dvd", d2, str(t2)), c[0] == "dvd")


def set_atom(f, g, value: bool):
    """f with every occurrence of the VG atom g (or its complement) decided."""
    kg, pg = atom_key(g)

    def fn(a):
        if is_vg_atom(a):
            ka, pa = atom_key(a)
            if ka == kg:
                return F.Const(value if pa == pg else not value)
        return a

    return map_formula(f, fn)


def _vg_atoms_under_rf_quantifiers(f, pred, inside=False, acc=None):
    acc = [] if acc is None else acc
    if F.is_atom(f):
        if inside and is_vg_atom(f) and pred(f):
            acc.append(f)
        return acc
    if isinstance(f, F.Const):
        return acc
    if isinstance(f, F.Not):
        return _vg_atoms_under_rf_quantifiers(f.arg, pred, inside, acc)
    if isinstance(f, (F.And, F.Or)):
        for a in f.args:
            _vg_atoms_under_rf_quantifiers(a, pred, inside, acc)
        return acc
    if isinstance(f, F.Implies):
        _vg_atoms_under_rf_quantifiers(f.lhs, pred, inside, acc)
        return _vg_atoms_under_rf_quantifiers(f.rhs, pred, inside, acc)
    if isinstance(f, (F.Exists, F.Forall)):
        return _vg_atoms_under_rf_quantifiers(f.body, pred, inside or f.var.sort.is_rf, acc)
    return acc


def _vg_atoms(f, pred) -> list:
    out = []
    for a in atoms(f):
        if is_vg_atom(a) and pred(a) and all(atom_key(a)[0] != atom_key(b)[0] for b in out):
            out.append(a)
    return out


def _shannon_out(q, pred):
    """Rewrite ∃v B / ∀v B, whose body has quantifier-free VG atoms, so that
    those atoms occur outside the quantifier."""
    found = _vg_atoms(q.body, pred)
    if not found:
        return q
    g = found[0]
    pos = _shannon_out(type(q)(q.var, simplify(set_atom(q.body, g, True))), pred)
    negf = _shannon_out(type(q)(q.var, simplify(set_atom(q.body, g, False))), pred)
    if pos == negf:
        return pos
    return F.disj(F.conj(g, pos), F.conj(F.neg(g), negf))


def hoist(f, pred=lambda a: True):
    """Pull value-group atoms out of residue-ring quantifiers.

    Works bottom-up: each residue-ring quantifier is Shannon-expanded on the
    value-group atoms of its own body only.
    """

    def go(g):
        if F.is_atom(g) or isinstance(g, F.Const):
            return g
        if isinstance(g, F.Not):
            return F.neg(go(g.arg))
        if isinstance(g, F.And):
            return F.conj(*(go(a) for a in g.args))
        if isinstance(g, F.Or):
            return F.disj(*(go(a) for a in g.args))
        if isinstance(g, F.Implies):
            return F.disj(F.neg(go(g.lhs)), go(g.rhs))
        if isinstance(g, (F.Exists, F.Forall)):
            body = go(g.body)
            q = type(g)(g.var, body)
            if g.var.sort.is_rf:
                return _shannon_out(q, pred)
            return q
        raise TypeError(f"not a formula: {g!r}")

    return simplify(go(simplify(f)))


def _tidy_term(t):
    if isinstance(t, RFOp):
        args = [_tidy_term(a) for a in t.args]
        if t.op == "*":
            if any(isinstance(a, RFLit) and a.value == 0 for a in args):
                return RFLit(0, t.n)
            args = [a for a in args if not (isinstance(a, RFLit) and a.value == 1)]
            if not args:
                return RFLit(1, t.n)
        elif t.op == "+":
            args = [a for a in args if not (isinstance(a, RFLit) and a.value == 0)]
            if not args:
                return RFLit(0, t.n)
        elif isinstance(args[0], RFLit) and args[0].value == 0:
            return args[0]
        if len(args) == 1 and t.op != "-":
            return args[0]
        return RFOp(t.op, tuple(args), t.n)
    if isinstance(t, Res):
        a = _tidy_term(t.arg)
        if isinstance(a, RFLit) and a.value in (0, 1):
            return RFLit(a.value, t.n)
        return Res(t.m, t.n, a)
    if isinstance(t, Cross) and t.arg.is_integer() and t.arg.const == 0:
        return RFLit(1, t.n)
    return t


def tidy(f):
    """Fold trivial residue-ring arithmetic (products with 0 or 1, sums with 0)."""

    def fn(a):
        if isinstance(a, F.RFEq):
            l, r = _tidy_term(a.lhs), _tidy_term(a.rhs)
            if l == r:
                return F.TRUE
            if isinstance(l, RFLit) and isinstance(r, RFLit) and {l.value, r.value} == {0, 1}:
                return F.FALSE
            return F.RFEq(l, r)
        if isinstance(a, F.AMem):
            t = _tidy_term(a.arg)
            if isinstance(t, RFLit) and t.value in (0, 1):
                return F.TRUE
            return F.AMem(a.n, t)
        if isinstance(a, F.Pred):
            return F.Pred(a.name, tuple(_tidy_term(t) for t in a.args))
        return a

    return simplify(map_formula(f, fn))


# substitution of +inf ---------------------------------------------------------------------


def _subst_inf(f, y: Var):
    """φ[y := +∞]: any term involving y becomes +∞."""
    inf = VGTerm((), 0, True)

    def vg(t):
        return inf if t.coeff(y) else t

    def fn(a):
        if isinstance(a, F.Cmp):
            l, r = vg(a.lhs), vg(a.rhs)
            if l.inf or r.inf:
                if l.inf and r.inf:
                    return F.Const(a.op in ("=", "<="))
                if r.inf:
                    return F.TRUE if a.op in ("<", "<=") else F.FALSE
                return F.FALSE
            return a
        if isinstance(a, F.Cong):
            if a.lhs.coeff(y) or a.rhs.coeff(y):
                return F.FALSE
            return a
        return map_rf_atom(a, lambda t: RFLit(0, t.n) if isinstance(t, Cross) and t.arg.coeff(y) else None)

    return map_formula(f, fn)


# the elimination ---------------------------------------------------------------------------


class _Names:
    def __init__(self, f):
        self.used = {v.name for v in all_vars(f)}

    def fresh(self, base: str) -> str:
        n = fresh_name(base, self.used)
        self.used.add(n)
        return n


def eliminate_vg_exists(f: F.Formula, y: Var = None, trace: Trace = None) -> F.Formula:
    """Remove ∃y from f = ∃y φ (or from ∃y f when y is given).

    Value-group quantifiers inside φ are eliminated first.  The output has
    no value-group quantifiers and may contain residue-ring quantifiers
    ranging over A_N sets.
    """
    trace = trace if trace is not None else Trace()
    if y is None:
        if not isinstance(f, F.Exists) or not f.var.sort.is_vg:
            raise UnsupportedAtom("expected an existential value-group quantifier")
        y, body = f.var, f.body
    else:
        body = f.body if isinstance(f, F.Exists) and f.var == y else f
    names = _Names(F.Exists(y, body))
    body = _eliminate_all(body, names, trace)
    return tidy(_elim(y, body, names, trace))


def eliminate_all(f: F.Formula, trace: Trace = None) -> F.Formula:
    """Equivalent formula without value-group quantifiers."""
    trace = trace if trace is not None else Trace()
    return tidy(_eliminate_all(f, _Names(f), trace))


def _check_fragment(f):
    for a in atoms(f):
        if not isinstance(a, (F.Cmp, F.Cong, F.RFEq, F.AMem, F.Pred)):
            raise UnsupportedAtom(f"unsupported atom {a!r}")


def _eliminate_all(f, names, trace):
    _check_fragment(f)
    if F.is_atom(f) or isinstance(f, F.Const):
        return f
    if isinstance(f, F.Not):
        return F.neg(_eliminate_all(f.arg, names, trace))
    if isinstance(f, F.And):
        return F.conj(*(_eliminate_all(a, names, trace) for a in f.args))
    if isinstance(f, F.Or):
        return F.disj(*(_eliminate_all(a, names, trace) for a in f.args))
    if isinstance(f, F.Implies):
        return F.disj(F.neg(_eliminate_all(f.lhs, names, trace)), _eliminate_all(f.rhs, names, trace))
    if isinstance(f, (F.Exists, F.Forall)):
        body = _eliminate_all(f.body, names, trace)
        if not f.var.sort.is_vg:
            return type(f)(f.var, body)
        if isinstance(f, F.Exists):
            return simplify(_elim(f.var, body, names, trace))
        return F.neg(simplify(_elim(f.var, simplify(F.neg(body)), names, trace)))
    raise TypeError(f"not a formula: {f!r}")


def _elim(y: Var, phi, names, trace):
    if y.sort.kind == "vginf":
        trace.add("infinity", f"∃{y}:vginf splits into {y} = +inf and a finite {y}")
        yf = Var(names.fresh(y.name), VG)
        from ..formula.transform import substitute

        finite = substitute(phi, y, VGTerm.var(yf))
        return F.disj(simplify(_subst_inf(phi, y)), _elim(yf, finite, names, trace))
    phi = simplify(phi)
    if y not in free_vars(phi):
        return phi
    ys = [c for c in crosses_of(phi) if c.arg.coeff(y)]
    if not ys:
        return _no_cross(y, phi, names, trace)
    trace.add("window-split", f"cross terms in {y}: " + ", ".join(f"cross[{c.n}]({c.arg})" for c in ys))
    return _split(y, phi, ys, [], names, trace)


def _split(y, phi, pending, ins, names, trace):
    if not pending:
        if not ins:
            return _no_cross(y, phi, names, trace)
        return _bounded(y, phi, ins, names, trace)
    c = pending[0]
    t, k = c.arg, VGTerm.ord(c.n)
    zero = RFLit(0, c.n)
    out_phi = F.conj(
        F.disj(F.Cmp("<", t, VGTerm.lit(0)), F.Cmp("<", k, t)),
        map_formula(phi, lambda a: map_rf_atom(a, lambda s: zero if s == c else None)),
    )
    in_phi = F.conj(F.Cmp("<=", VGTerm.lit(0), t), F.Cmp("<=", t, k), phi)
    parts = []
    out_phi = simplify(out_phi)
    if out_phi != F.FALSE:
        parts.append(_split(y, out_phi, pending[1:], ins, names, trace))
    in_phi = simplify(in_phi)
    if in_phi != F.FALSE:
        still = [d for d in crosses_of(in_phi) if d == c]
        parts.append(_split(y, in_phi, pending[1:], ins + ([c] if still else []), names, trace))
    return F.disj(*parts)


def _blocks(f, y) -> list:
    """Maximal y-free subformulas that are not pure quantifier-free Presburger."""
    out = []

    def pure(g):
        from ..formula.transform import quantifiers

        return all(is_vg_atom(a) for a in atoms(g)) and not quantifiers(g)

    def go(g):
        if isinstance(g, F.Const):
            return
        if y not in free_vars(g):
            if not pure(g) and g not in out:
                out.append(g)
            return
        if isinstance(g, F.Not):
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


def replace_sub(f, target, value):
    if f == target:
        return value
    if isinstance(f, F.Not):
        return F.neg(replace_sub(f.arg, target, value))
    if isinstance(f, F.And):
        return F.conj(*(replace_sub(a, target, value) for a in f.args))
    if isinstance(f, F.Or):
        return F.disj(*(replace_sub(a, target, value) for a in f.args))
    if isinstance(f, F.Implies):
        return F.disj(F.neg(replace_sub(f.lhs, target, value)), replace_sub(f.rhs, target, value))
    if isinstance(f, (F.Exists, F.Forall)):
        return type(f)(f.var, replace_sub(f.body, target, value))
    return f


def _no_cross(y, phi, names, trace):
    phi = hoist(phi, lambda a: any(t.coeff(y) for t in _vg_terms_of_atom(a)))
    blocks = _blocks(phi, y)
    if not blocks:
        trace.add("presburger", f"Cooper elimination of {y}")
        return pres_qe(F.Exists(y, phi))
    b = blocks[0]
    trace.add("residue-split", f"split on the {y}-free residue-ring condition {b}")
    pos = _no_cross(y, simplify(replace_sub(phi, b, F.TRUE)), names, trace)
    negf = _no_cross(y, simplify(replace_sub(phi, b, F.FALSE)), names, trace)
    if pos == negf:
        return pos
    return F.disj(F.conj(b, pos), F.conj(F.neg(b), negf))


# bounded case ------------------------------------------------------------------------------


def _pow_term(base, e: int, n: int):
    return rf_pow(base, e) if e > 0 else RFLit(1, n)


class _Builder:
    """Rewrites atoms and cross terms in w = a·y + α through η = cross_N(w)."""

    def __init__(self, y, a, alpha, n1, N, eta, names):
        self.y, self.a, self.alpha, self.n1, self.N, self.eta, self.names = y, a, alpha, n1, N, eta, names

    def eta_at(self, M: int):
        """cross_M(w) for M | N."""
        return self.eta if M == self.N else Res(self.N, M, self.eta)

    def eta_pow(self, M: int, e: int):
        return _pow_term(self.eta_at(M), e, M)

    def in_A(self, M: int, base: str):
        v = Var(self.names.fresh(base), RF(M))
        return v

    def divides(self, M: int, A, B):
        """A | B in RF_M with the quotient in A_M."""
        z = self.in_A(M, "zeta")
        return F.Exists(z, F.conj(F.AMem(M, z), F.RFEq(B, RFOp("*", (z, A), M))))

    def lower(self, c: int, B1: VGTerm):
        """c·w ≥ B1 for c > 0."""
        M = self.n1**c
        K = VGTerm.ord(self.n1).scale(c)
        return F.disj(
            F.Cmp("<=", B1, VGTerm.lit(0)),
            F.conj(
                F.Cmp("<", VGTerm.lit(0), B1),
                F.Cmp("<=", B1, K),
                self.divides(M, Cross(M, B1), self.eta_pow(M, c)),
            ),
        )

    def upper(self, c: int, B2: VGTerm):
        """c·w ≤ B2 for c > 0."""
        M = self.n1**c
        K = VGTerm.ord(self.n1).scale(c)
        return F.disj(
            F.Cmp("<=", K, B2),
            F.conj(
                F.Cmp("<=", VGTerm.lit(0), B2),
                F.Cmp("<", B2, K),
                self.divides(M, self.eta_pow(M, c), Cross(M, B2)),
            ),
        )

    def ge0(self, c: int, beta: VGTerm):
        """0 ≤ c·w + β."""
        if c > 0:
            return self.lower(c, -beta)
        return self.upper(-c, beta)

    def w_mod(self, D: int, r: int):
        """w ≡ r mod D."""
        if D == 1:
            return F.TRUE
        z = self.in_A(self.N, "zeta")
        return F.Exists(
            z,
            F.conj(F.AMem(self.N, z), F.RFEq(self.eta, RFOp("*", (Cross(self.N, VGTerm.lit(r)), _pow_term(z, D, self.N)), self.N))),
        )

    def cong(self, D: int, c: int, beta: VGTerm):
        """D | c·w + β."""
        if D == 1:
            return F.TRUE
        if c % D == 0:
            return F.Cong(D, beta, VGTerm.lit(0))
        parts = []
        for r in range(D):
            parts.append(F.conj(F.Cong(D, beta + VGTerm.lit(c * r), VGTerm.lit(0)), self.w_mod(D, r)))
        return F.disj(*parts)

    def atom(self, at):
        """Translate an atom whose value-group terms involve y."""
        y, a, alpha = self.y, self.a, self.alpha
        if isinstance(at, F.Cmp):
            if at.lhs.inf or at.rhs.inf:
                return at
            t = at.rhs - at.lhs
            c = t.coeff(y)
            beta = t.drop(y).scale(a) - alpha.scale(c)
            if at.op == "<":
                return self.ge0(c, beta - VGTerm.lit(1))
            if at.op == "<=":
                return self.ge0(c, beta)
            return F.conj(self.ge0(c, beta), self.ge0(-c, -beta))
        t = at.lhs - at.rhs
        c = t.coeff(y)
        beta = t.drop(y).scale(a) - alpha.scale(c)
        return self.cong(at.d * a, c, beta)


def _bounded(y, phi, ins, names, trace):
    anchor = ins[0]
    a = anchor.arg.coeff(y)
    if a < 0:
        from ..formula.transform import substitute

        trace.add("orientation", f"replace {y} by -{y} so that the anchor coefficient is positive")
        phi = substitute(phi, y, VGTerm.var(y).scale(-1))
        ins = [Cross(c.n, c.arg.substitute(y, VGTerm.var(y).scale(-1))) for c in ins]
        anchor = ins[0]
        a = -a
    n1 = anchor.n
    alpha = anchor.arg.drop(y)
    trace.add(
        "anchor",
        f"w = {anchor.arg} lies in [0, ord({n1})]; atoms are scaled by {a} and rewritten in w",
    )

    # moduli needed ------------------------------------------------------------
    need = {n1}
    for at in atoms(phi):
        if is_vg_atom(at):
            for t in _vg_terms_of_atom(at):
                c = t.coeff(y)
                if c:
                    need.add(n1 ** abs(c))
    others = []
    for c in crosses_of(phi):
        b = c.arg.coeff(y)
        if not b or c == anchor:
            continue
        M = c.n**a
        need.add(M)
        need.add(M * n1 ** abs(b))
        others.append(c)
    N = 1
    for m in need:
        N = _lcm(N, m)
    eta = Var(names.fresh("eta"), RF(N))
    B = _Builder(y, a, alpha, n1, N, eta, names)
    if a > 1:
        trace.add("coefficient", f"cross_n(t) recovered as res of an {a}-th root of cross_(n^{a})({a}*t) in A")
    trace.add("residue-quantifier", f"∃{y} becomes ∃{eta.name} in A[{N}] \\ {{0}}")

    # per cross term: alternatives (guard, defs, value)
    alts = []
    for c in others:
        b = c.arg.coeff(y)
        M = c.n**a
        delta = c.arg.drop(y).scale(a) - alpha.scale(b)  # a·t = b·w + δ
        choices = []
        if b > 0:
            choices.append((F.Cmp("<=", VGTerm.lit(0), delta), [], RFOp("*", (B.eta_pow(M, b), Cross(M, delta)), M)))
            M2 = M * n1**b
            z = Var(names.fresh("zeta"), RF(M2))
            d = F.RFEq(RFOp("*", (z, Cross(M2, -delta)), M2), B.eta_pow(M2, b))
            choices.append((F.Cmp("<", delta, VGTerm.lit(0)), [(z, d)], Res(M2, M, z)))
        else:
            M2 = M * n1 ** (-b)
            z = Var(names.fresh("zeta"), RF(M2))
            d = F.RFEq(RFOp("*", (z, B.eta_pow(M2, -b)), M2), Cross(M2, delta))
            choices.append((F.TRUE, [(z, d)], Res(M2, M, z)))
        if a > 1:
            rooted = []
            for g, defs, val in choices:
                rho = Var(names.fresh("rho"), RF(M))
                rooted.append((g, defs + [(rho, F.RFEq(_pow_term(rho, a, M), val))], Res(M, c.n, rho)))
            choices = rooted
        alts.append((c, choices))

    def rewrite(combo):
        values = {anchor: B.eta_at(n1)}
        for (c, _), (_, _, val) in zip(alts, combo):
            values[c] = val

        def fn(at):
            if is_vg_atom(at):
                if any(t.coeff(y) for t in _vg_terms_of_atom(at)):
                    return B.atom(at)
                return at
            return map_rf_atom(at, lambda s: values.get(s) if isinstance(s, Cross) and s.arg.coeff(y) else None)

        return map_formula(phi, fn)

    branches = []
    for combo in itertools.product(*[ch for _, ch in alts]):
        guard = F.conj(*(g for g, _, _ in combo))
        if simplify(guard) == F.FALSE:
            continue
        body = rewrite(combo)
        defs = [d for _, ds, _ in combo for d in ds]
        for v, d in reversed(defs):
            body = F.Exists(v, F.conj(F.AMem(v.sort.n, v), d, body))
        branches.append(F.conj(guard, body))
    inner = F.disj(*branches)
    scope = F.conj(
        F.AMem(N, eta),
        F.neg(F.RFEq(eta, RFLit(0, N))),
        F.neg(F.RFEq(B.eta_at(n1), RFLit(0, n1))) if n1 != N else F.TRUE,
        B.cong(a, 1, -alpha),
        inner,
    )
    return F.Exists(eta, scope)
