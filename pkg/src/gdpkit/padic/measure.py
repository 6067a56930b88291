"""Exact Haar measure of sets described through ord, ac and res of coordinates.

A set S ⊂ K^d is given as a formula whose only field material is the
opaque parameters ord{x_i} and ac[n]{x_i}.  For fixed valuations v and unit
classes u mod p^K_i the set is a union of boxes of volume Π p^(−v_i−K_i), so

    vol(S) = Σ_u p^(−ΣK_i) · Σ_{v ∈ S_u} p^(−Σ v_i)

where S_u ⊂ ℤ^d is Presburger once the residue-ring atoms are decided.
Cross terms of valuations are first removed by splitting on their window,
and the inner sum is computed in closed form through rectilinearization:
each piece is a finite set times ℕ^ℓ with exponents affine in the free
coordinates, i.e. a finite sum of products of geometric series.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Optional

from ..errors import NotMeasurableFragment, NotRectilinearizable
from ..formula import formulas as F
from ..formula.arith import vp
from ..formula.evaluate import compile_formula
from ..formula.sorts import VG
from ..formula.terms import AcParam, Cross, OrdConst, OrdParam, Res, RFLit, RFOp, Var, VGTerm, rf_children
from ..formula.transform import _rf_terms_of_atom, _vg_terms_of_atom, atoms, free_vars
from ..presburger.linear import LinForm, simplify
from ..presburger.recti import rectilinearize
from .structure import QpStructure, _field_labels


def res_term(label: str, n: int):
    """res_n(x) as a residue-ring term, valid for x ∈ O_K: cross_n(ord x)·ac_n(x)."""
    return RFOp("*", (Cross(n, VGTerm.var(OrdParam(label))), AcParam(n, label)), n)


# rewriting helpers -----------------------------------------------------------------


def _fix_ord_consts(t: VGTerm, p: int) -> VGTerm:
    for k, _ in t.coeffs:
        if isinstance(k, OrdConst):
            t = t.substitute(k, VGTerm.lit(1 if k.prime == p else 0))
    return t


def _map_rf_top(t, fn):
    """Rebuild an RF term, letting fn replace whole subterms (top-down)."""
    r = fn(t)
    if r is not None:
        return r
    if isinstance(t, RFOp):
        return RFOp(t.op, tuple(_map_rf_top(a, fn) for a in t.args), t.n)
    if isinstance(t, Res):
        return Res(t.m, t.n, _map_rf_top(t.arg, fn))
    return t


def _map_atom(a, vg_fn, rf_fn):
    if isinstance(a, F.Cmp):
        return F.Cmp(a.op, vg_fn(a.lhs), vg_fn(a.rhs))
    if isinstance(a, F.Cong):
        return F.Cong(a.d, vg_fn(a.lhs), vg_fn(a.rhs))
    rf = lambda t: _map_rf_top(t, rf_fn)  # noqa: E731
    if isinstance(a, F.RFEq):
        return F.RFEq(rf(a.lhs), rf(a.rhs))
    if isinstance(a, F.AMem):
        return F.AMem(a.n, rf(a.arg))
    if isinstance(a, F.Pred):
        return F.Pred(a.name, tuple(rf(t) for t in a.args))
    raise TypeError(f"not an atom: {a!r}")


def _map_formula(f, atom_fn):
    if F.is_atom(f):
        return atom_fn(f)
    if isinstance(f, F.Const):
        return f
    if isinstance(f, F.Not):
        return F.neg(_map_formula(f.arg, atom_fn))
    if isinstance(f, F.And):
        return F.conj(*(_map_formula(a, atom_fn) for a in f.args))
    if isinstance(f, F.Or):
        return F.disj(*(_map_formula(a, atom_fn) for a in f.args))
    if isinstance(f, F.Implies):
        return F.Implies(_map_formula(f.lhs, atom_fn), _map_formula(f.rhs, atom_fn))
    if isinstance(f, (F.Exists, F.Forall)):
        return type(f)(f.var, _map_formula(f.body, atom_fn))
    raise TypeError(f"not a formula: {f!r}")


def _all_crosses(f) -> list:
    out = []

    def walk(t):
        if isinstance(t, Cross):
            out.append(t)
        for c in rf_children(t):
            walk(c)

    for a in atoms(f):
        for t in _rf_terms_of_atom(a):
            walk(t)
    return out


def _split_crosses(f, p: int) -> list:
    """[(condition, f')] with every cross of a valuation replaced by a literal."""
    todo = [c for c in _all_crosses(f) if c.arg.params()]
    if not todo:
        return [(F.TRUE, f)]
    target = todo[0]
    k = vp(target.n, p) + 1
    t = target.arg
    cases = [(F.disj(F.Cmp("<", t, VGTerm.lit(0)), F.Cmp("<=", VGTerm.lit(k), t)), 0)]
    cases += [(F.Cmp("=", t, VGTerm.lit(j)), p**j) for j in range(k)]
    out = []
    for cond, val in cases:
        lit = RFLit(val, target.n)
        g = _map_formula(f, lambda a: _map_atom(a, lambda s: s, lambda s: lit if s == target else None))
        for cond2, h in _split_crosses(g, p):
            out.append((F.conj(cond, cond2), h))
    return out


def _is_vg_atom(a) -> bool:
    return isinstance(a, (F.Cmp, F.Cong))


def _has_vg_atoms(f) -> bool:
    return any(_is_vg_atom(a) for a in atoms(f))


def _decide_rf(f, st: QpStructure, env: dict):
    """Replace every maximal residue-ring-only subformula by its truth value."""
    if isinstance(f, F.Const):
        return f
    if not _has_vg_atoms(f):
        return F.TRUE if compile_formula(f, st)(env) else F.FALSE
    if _is_vg_atom(f):
        return f
    if isinstance(f, F.Not):
        return F.neg(_decide_rf(f.arg, st, env))
    if isinstance(f, F.And):
        return F.conj(*(_decide_rf(a, st, env) for a in f.args))
    if isinstance(f, F.Or):
        return F.disj(*(_decide_rf(a, st, env) for a in f.args))
    if isinstance(f, F.Implies):
        return F.disj(F.neg(_decide_rf(f.lhs, st, env)), _decide_rf(f.rhs, st, env))
    if isinstance(f, (F.Exists, F.Forall)) and f.var.sort.is_rf:
        parts = []
        for v in range(st.rf_modulus(f.var.sort.n)):
            e = dict(env)
            e[f.var.name] = v
            parts.append(_decide_rf(f.body, st, e))
        return F.disj(*parts) if isinstance(f, F.Exists) else F.conj(*parts)
    raise NotMeasurableFragment("value-group quantifiers mixed with residue-ring conditions")


# Presburger geometric sums -----------------------------------------------------------


def _vg_params_to_vars(f, names: dict, p: int):
    def vg(t):
        t = _fix_ord_consts(t, p)
        for k, _ in t.coeffs:
            if isinstance(k, OrdParam):
                t = t.substitute(k, VGTerm.var(names[k.label]))
        return t

    return _map_formula(f, lambda a: _map_atom(a, vg, lambda s: None))


def _bounded_points(coords, p: int):
    """All value assignments {Var: int} of the bounded coordinates."""
    bounded = [c for c in coords if c.kind == "bounded"]

    def rec(i, env):
        if i == len(bounded):
            yield dict(env)
            return
        c = bounded[i]
        names = {v.name: val for v, val in env.items()}
        lo = LinForm.from_vg(_fix_ord_consts(c.beta1, p)).evaluate(names)
        hi = LinForm.from_vg(_fix_ord_consts(c.beta2, p)).evaluate(names)
        # c·x ∈ [lo, hi], x ≡ r mod ℓ
        x0 = _ceil(Fraction(lo) / c.c)
        x1 = _floor(Fraction(hi) / c.c)
        x = x0 + (c.r - x0) % c.ell
        while x <= x1:
            env[c.var] = x
            yield from rec(i + 1, env)
            x += c.ell
        env.pop(c.var, None)

    yield from rec(0, {})


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def geometric_sum(P: F.Formula, xs: list, exponent: LinForm, p: int, max_points: int = 2_000_000) -> Fraction:
    """Σ_{v ∈ P} p^{exponent(v)} for a closed Presburger set P ⊂ ℤ^m.

    Raises NotMeasurableFragment when the sum diverges.
    """
    P = simplify(P)
    if P == F.FALSE:
        return Fraction(0)
    if not xs:
        return Fraction(p) ** int(exponent.const) if P == F.TRUE else Fraction(0)
    try:
        pieces = rectilinearize(P, xs)
    except NotRectilinearizable as e:
        raise NotMeasurableFragment(str(e)) from None
    total = Fraction(0)
    seen = 0
    for piece in pieces:
        guard = simplify(_guard_of(piece))
        if guard == F.FALSE:
            continue
        e_out = exponent.substitute_many({x: piece.rho_inv[x.name] for x in xs})
        e_out = LinForm.make({k: c for k, c in e_out.coeffs if not isinstance(k, OrdConst)}, e_out.const) + sum(
            (LinForm.const_(c * (1 if k.prime == p else 0)) for k, c in e_out.coeffs if isinstance(k, OrdConst)),
            LinForm(),
        )
        factor = Fraction(1)
        for w in piece.free_vars:
            ej = e_out.coeff(w)
            if ej >= 0:
                raise NotMeasurableFragment("the set has infinite measure")
            if ej.denominator != 1:
                raise NotMeasurableFragment("non-integral exponent along a free direction")
            factor /= 1 - Fraction(p) ** int(ej)
        by_var = {c.var: c for c in piece.coords}
        for pt in _bounded_points(piece.coords, p):
            seen += 1
            if seen > max_points:
                raise NotMeasurableFragment("bounded part too large to enumerate")
            sub = {}
            for x, val in pt.items():
                c = by_var[x]
                sub[Var(f"u_{x.name}", VG)] = LinForm.const_(Fraction(val - c.r, c.ell))
            rest = e_out.substitute_many(sub)
            c0 = rest.const
            if c0.denominator != 1:
                raise NotMeasurableFragment("non-integral exponent")
            total += Fraction(p) ** int(c0) * factor
    return total


def _guard_of(piece) -> F.Formula:
    # the parameter guard is the first conjunct of Λ before bounds; recompute
    # from the piece formula by dropping coordinate atoms
    xs = set(piece.xs)

    def keep(a):
        vs = set()
        for t in _vg_terms_of_atom(a):
            vs |= t.variables()
        return a if not (vs & xs) else F.TRUE

    return _map_formula(piece.part, keep)


# the measure --------------------------------------------------------------------------


def measure(
    S: F.Formula,
    p: int,
    weight: Optional[VGTerm] = None,
    preds: Optional[Mapping[str, Callable]] = None,
) -> Fraction:
    """∫_S q^weight |dx| over K^d, exactly.

    S may use ord{x}, ac[n]{x} (and res via res_term), ord(n) constants,
    cross of valuations, A_n and named predicates (given through preds).
    weight is an affine value-group term in the ord parameters.
    """
    if free_vars(S):
        raise NotMeasurableFragment(f"free variables {sorted(v.name for v in free_vars(S))} in a measurable set")
    labels = _field_labels(S)
    if weight is not None:
        for k in weight.params():
            labels.setdefault(k.label, 0)
    labels = dict(sorted(labels.items()))
    prec = {lab: (vp(n, p) + 1 if n else 0) for lab, n in labels.items()}
    names = {lab: Var(f"v_{lab}", VG) for lab in labels}
    xs = [names[lab] for lab in labels]
    expo = LinForm.const_(0)
    if weight is not None:
        w = _fix_ord_consts(weight, p)
        for k, c in w.coeffs:
            expo = expo + LinForm.var(names[k.label]).scale(c)
        expo = expo + w.const
    for lab in labels:
        expo = expo - LinForm.var(names[lab])

    st = QpStructure(p, preds)
    unit_lists = [[u for u in range(p ** prec[lab]) if u % p] if prec[lab] else [1] for lab in labels]
    base = Fraction(1)
    for lab in labels:
        base *= Fraction(1, p ** prec[lab]) if prec[lab] else Fraction(p - 1, p)

    @lru_cache(maxsize=None)
    def presburger_sum(P):
        return geometric_sum(P, xs, expo, p)

    total = Fraction(0)
    for cond, g in _split_crosses(S, p):
        for units in itertools.product(*unit_lists):
            env = {lab: (0, u) for lab, u in zip(labels, units)}
            h = simplify(_vg_params_to_vars(F.conj(cond, _decide_rf(g, st, env)), names, p))
            if h == F.FALSE:
                continue
            total += base * presburger_sum(h)
    return total


def ball_measure(p: int, r: int) -> Fraction:
    """vol(p^r O_K) = p^(−r)."""
    return Fraction(1, p**r) if r >= 0 else Fraction(p ** (-r))
