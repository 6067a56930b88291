"""Compile formulas to Python closures and evaluate them in a structure.

Value-group values are Python ints or ``INF`` (``math.inf``).  A term in
which a +inf value occurs with nonzero coefficient evaluates to +inf.

Quantifiers over the value group are decided exactly: for fixed values of
the other variables the body, as a function of the bound variable y, only
changes at finitely many critical points (zeros of linear atoms and the
windows of cross terms) and is periodic in between, with period the lcm of
the congruence moduli.  Testing a neighbourhood of width lcm+1 around each
critical point therefore decides the quantifier.  Nested value-group
quantifiers are evaluated over an explicit window when one is given.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Optional

from ..errors import NotPresburger, UnboundVariable
from . import formulas as F
from .arith import lcm, vp
from .terms import AcParam, Cross, OrdConst, OrdParam, Res, RFLit, RFOp, Var, VGTerm
from .transform import atoms as _atoms
from .transform import _rf_terms_of_atom, _crosses

INF = math.inf


class Structure:
    """Interpretation of ord constants, residue rings and predicates.

    The base class interprets only the value group (ℤ with ord(q) = v_p(q)
    for a fixed prime p, or no ord constants at all when p is None).
    """

    def __init__(self, p: Optional[int] = None, vg_window: Optional[tuple] = None):
        self.p = p
        self.vg_window = vg_window

    def ord_const(self, prime: int) -> int:
        if self.p is None:
            raise UnboundVariable(f"ord({prime}) needs a fixed prime")
        return 1 if prime == self.p else 0

    def ord_value(self, n: int) -> int:
        return vp(n, self.p)

    # residue rings ------------------------------------------------------
    def rf_modulus(self, n: int) -> int:
        raise NotPresburger("this structure has no residue rings")

    def cross(self, n: int, gamma) -> int:
        raise NotPresburger("this structure has no residue rings")

    def in_A(self, n: int, v: int) -> bool:
        raise NotPresburger("this structure has no residue rings")

    def A_elements(self, n: int) -> list:
        raise NotPresburger("this structure has no residue rings")

    def pred(self, name: str, args: tuple) -> bool:
        raise NotPresburger(f"no interpretation for Phi.{name}")

    def ord_param(self, label: str, env: dict):
        try:
            return env[label]
        except KeyError:
            raise UnboundVariable(label) from None

    def ac_param(self, n: int, label: str, env: dict) -> int:
        raise NotPresburger("this structure has no angular components")


def compile_vg(t: VGTerm, st: Structure) -> Callable[[dict], object]:
    if t.inf:
        return lambda env: INF
    const = t.const
    parts = []
    for k, c in t.coeffs:
        if isinstance(k, OrdConst):
            const += c * st.ord_const(k.prime)
        else:
            parts.append((k, c))
    if not parts:
        return lambda env: const

    def fn(env, parts=parts, const=const):
        s = const
        for k, c in parts:
            if isinstance(k, Var):
                try:
                    v = env[k.name]
                except KeyError:
                    raise UnboundVariable(k.name) from None
            else:
                v = st.ord_param(k.label, env)
            if v == INF:
                return INF
            s += c * v
        return s

    return fn


def compile_rf(t, st: Structure) -> Callable[[dict], int]:
    n = t.sort.n
    mod = st.rf_modulus(n)
    if isinstance(t, Var):
        name = t.name

        def fv(env):
            try:
                return env[name] % mod
            except KeyError:
                raise UnboundVariable(name) from None

        return fv
    if isinstance(t, RFLit):
        v = t.value % mod
        return lambda env: v
    if isinstance(t, AcParam):
        return lambda env: st.ac_param(t.n, t.label, env) % mod
    if isinstance(t, Res):
        inner = compile_rf(t.arg, st)
        return lambda env: inner(env) % mod
    if isinstance(t, Cross):
        arg = compile_vg(t.arg, st)
        return lambda env: st.cross(n, arg(env))
    if isinstance(t, RFOp):
        subs = [compile_rf(a, st) for a in t.args]
        if t.op == "-":
            s0 = subs[0]
            return lambda env: (-s0(env)) % mod
        if t.op == "+":
            return lambda env: sum(s(env) for s in subs) % mod

        def prod(env):
            r = 1
            for s in subs:
                r = (r * s(env)) % mod
            return r

        return prod
    raise TypeError(f"not an RF term: {t!r}")


def _cmp(op, a, b) -> bool:
    if op == "=":
        return a == b
    if op == "<":
        return a < b
    return a <= b


def compile_formula(f, st: Structure) -> Callable[[dict], bool]:
    if isinstance(f, F.Const):
        v = f.value
        return lambda env: v
    if isinstance(f, F.Cmp):
        l, r, op = compile_vg(f.lhs, st), compile_vg(f.rhs, st), f.op
        return lambda env: _cmp(op, l(env), r(env))
    if isinstance(f, F.Cong):
        l, r, d = compile_vg(f.lhs, st), compile_vg(f.rhs, st), f.d

        def cg(env):
            a, b = l(env), r(env)
            if a == INF or b == INF:
                return False
            return (a - b) % d == 0

        return cg
    if isinstance(f, F.RFEq):
        l, r = compile_rf(f.lhs, st), compile_rf(f.rhs, st)
        return lambda env: l(env) == r(env)
    if isinstance(f, F.AMem):
        a, n = compile_rf(f.arg, st), f.n
        return lambda env: st.in_A(n, a(env))
    if isinstance(f, F.Pred):
        args = [compile_rf(a, st) for a in f.args]
        name = f.name
        return lambda env: st.pred(name, tuple(a(env) for a in args))
    if isinstance(f, F.Not):
        g = compile_formula(f.arg, st)
        return lambda env: not g(env)
    if isinstance(f, F.And):
        gs = [compile_formula(a, st) for a in f.args]
        return lambda env: all(g(env) for g in gs)
    if isinstance(f, F.Or):
        gs = [compile_formula(a, st) for a in f.args]
        return lambda env: any(g(env) for g in gs)
    if isinstance(f, F.Implies):
        a, b = compile_formula(f.lhs, st), compile_formula(f.rhs, st)
        return lambda env: (not a(env)) or b(env)
    if isinstance(f, (F.Exists, F.Forall)):
        return _compile_quant(f, st)
    raise TypeError(f"not a formula: {f!r}")


def _guarded_A(body, v: Var):
    """If body is A[n](v) ∧ rest, return rest (so v ranges over A_n only)."""
    if isinstance(body, F.And):
        for i, a in enumerate(body.args):
            if isinstance(a, F.AMem) and a.arg == v:
                rest = body.args[:i] + body.args[i + 1 :]
                return F.conj(*rest)
    if isinstance(body, F.AMem) and body.arg == v:
        return F.TRUE
    return None


def _compile_quant(f, st: Structure):
    v = f.var
    is_ex = isinstance(f, F.Exists)
    name = v.name
    if v.sort.is_rf:
        n = v.sort.n
        rest = _guarded_A(f.body, v) if is_ex else None
        if rest is not None:
            g = compile_formula(rest, st)
            dom = st.A_elements(n)
        else:
            g = compile_formula(f.body, st)
            dom = range(st.rf_modulus(n))

        def rfq(env):
            e = dict(env)
            for val in dom:
                e[name] = val
                if g(e) == is_ex:
                    return is_ex
            return not is_ex

        return rfq
    # value-group quantifier
    body = f.body
    g = compile_formula(body, st)
    nested = any(q.sort.is_vg for q in _bound_vars(body))
    if nested:
        if st.vg_window is None:
            raise NotImplementedError("nested value-group quantifiers need an explicit window")
        lo, hi = st.vg_window
        dom_fixed = list(range(lo, hi + 1)) + ([INF] if v.sort.kind == "vginf" else [])

        def wq(env):
            e = dict(env)
            for val in dom_fixed:
                e[name] = val
                if g(e) == is_ex:
                    return is_ex
            return not is_ex

        return wq
    points = _critical_point_fn(body, v, st)
    with_inf = v.sort.kind == "vginf"

    def vq(env):
        e = dict(env)
        cand = points(env)
        if with_inf:
            cand = list(cand) + [INF]
        for val in cand:
            e[name] = val
            if g(e) == is_ex:
                return is_ex
        return not is_ex

    return vq


def _bound_vars(f) -> list:
    from .transform import quantifiers

    return quantifiers(f)


def _critical_point_fn(body, v: Var, st: Structure):
    """Return env -> sorted list of test values for the bound variable v."""
    lin = []  # (a, rest_fn): critical point -rest/a
    windows = []  # (a, rest_fn, width_n)
    period = 1
    for atom in _atoms(body):
        if isinstance(atom, (F.Cmp, F.Cong)):
            t = atom.rhs - atom.lhs if not (atom.lhs.inf or atom.rhs.inf) else None
            if t is None:
                continue
            a = t.coeff(v)
            if not a:
                continue
            if isinstance(atom, F.Cong):
                period = lcm(period, atom.d)
            lin.append((a, compile_vg(t.drop(v), st)))
        else:
            for rt in _rf_terms_of_atom(atom):
                for c in _crosses(rt):
                    a = c.arg.coeff(v)
                    if a:
                        windows.append((a, compile_vg(c.arg.drop(v), st), c.n))
    L = period

    def points(env):
        crit = []
        for a, rest in lin:
            r = rest(env)
            if r == INF:
                continue
            crit.append(Fraction(-r, a))
        for a, rest, n in windows:
            r = rest(env)
            if r == INF:
                continue
            top = st.ord_value(n)
            for tv in range(0, top + 1):
                crit.append(Fraction(tv - r, a))
            crit.append(Fraction(-r, a))
        pts = set(range(0, L))
        for c in crit:
            base = math.floor(c)
            pts.update(range(base - L - 1, base + L + 2))
        return sorted(pts)

    return points


def evaluate(f, env: dict, st: Optional[Structure] = None, p: Optional[int] = None) -> bool:
    st = st or Structure(p)
    return compile_formula(f, st)(env)
