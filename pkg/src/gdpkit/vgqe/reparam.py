"""Reparameterization by cross values, and bounds for definable VG-valued maps.

In weak orthogonal form a set X ⊆ Y × VG^m depends on its residue-ring data
only through finitely many values ζ_j = cross_{n_j}(t_j).  Adding ζ_j as
new parameters, X splits into fibres that are Presburger in (z, γ(ζ), x)
where γ_j(ζ_j) ∈ [0, ord(n_j)] ∪ {+∞} is the exponent with cross(γ_j) = ζ_j.

For a definable map f into the value group, its graph in weak orthogonal
form yields finitely many candidate lower bounds: Presburger lower bounds
on the output variable and the starts of cross-term windows.  Candidates
that differ by a non-negative combination of ord constants are merged,
which enlarges n.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..errors import NotAFunction, UnsupportedAtom
from ..formula import formulas as F
from ..formula.arith import lcm, vp
from ..formula.evaluate import compile_formula, compile_vg
from ..formula.printer import to_text
from ..formula.serialize import formula_to_json
from ..formula.sorts import RF, VGINF
from ..formula.terms import INF, OrdConst, Var, VGTerm
from ..formula.transform import dnf_clauses, free_vars, params
from ..padic.structure import QpStructure
from ..presburger.linear import canon_literal, simplify
from .check import assignments
from .eliminate import Trace, crosses_of, eliminate_all, map_formula, map_rf_atom
from .normal_form import WeakOrthoForm, weak_ortho_normal_form


# candidate bounds ----------------------------------------------------------------------------


@dataclass(frozen=True)
class CeilTerm:
    """⌈num / den⌉ for a value-group term num and den > 0."""

    num: VGTerm
    den: int = 1

    def value(self, env, st):
        v = compile_vg(self.num, st)(env)
        if v == math.inf:
            return v
        return -((-v) // self.den)

    def is_term(self) -> bool:
        return self.den == 1

    def __sub__(self, other: "CeilTerm"):
        if self.den == 1 and other.den == 1:
            return self.num - other.num
        return None

    def __str__(self) -> str:
        return str(self.num) if self.den == 1 else f"ceil(({self.num})/{self.den})"


def _lower_bounds(lit, v) -> list:
    """Lower bounds v ≥ ⌈num/den⌉ implied by one literal."""
    c = canon_literal(lit)
    if c is None or c[0] not in ("lt", "eq"):
        return []
    t = c[1]
    a = t.coeff(v)
    if not a:
        return []
    s = t.drop(v)
    if c[0] == "lt":  # 0 < a v + s
        if a > 0:
            return [CeilTerm(VGTerm.lit(1) - s, a)]
        return []
    if a < 0:
        a, s = -a, -s
    return [CeilTerm(-s, a)]


def _moduli(lit, v) -> int:
    c = canon_literal(lit)
    if c is not None and c[0] in ("dvd", "ndvd") and c[2].coeff(v):
        return c[1]
    return 1


def _window_bounds(cross, v) -> list:
    """(region, bound) pairs: v ≥ bound on the region of the cross window
    and on the region above it."""
    t = cross.arg
    a = t.coeff(v)
    s = t.drop(v)
    K = VGTerm.ord(cross.n)
    inside = F.conj(F.Cmp("<=", VGTerm.lit(0), t), F.Cmp("<=", t, K))
    if a > 0:  # 0 ≤ a v + s ≤ K, or a v + s > K
        return [(inside, CeilTerm(-s, a)), (F.Cmp("<", K, t), CeilTerm(K + VGTerm.lit(1) - s, a))]
    a = -a  # s − a v ∈ [0, K], or s − a v < 0
    return [(inside, CeilTerm(s - K, a)), (F.Cmp("<", t, VGTerm.lit(0)), CeilTerm(s + VGTerm.lit(1), a))]


def satisfiable(theta: F.Formula) -> bool:
    """Whether a Presburger formula has a solution for some prime.

    After closing it existentially only ord constants remain, and their
    values depend on the prime only through which of them equals 1.
    """
    from ..formula.evaluate import Structure
    from ..formula.transform import ord_primes
    from ..presburger.cooper import pres_qe

    closed = pres_qe(F.exists(sorted(free_vars(theta), key=lambda u: u.name), theta))
    qs = sorted(ord_primes(closed))
    other = next(q for q in itertools.count(2) if q not in qs and all(q % d for d in range(2, q)))
    return any(compile_formula(closed, Structure(q))({}) for q in qs + [other])


def _ord_gap(d: VGTerm) -> Optional[int]:
    """m with d = ord(m) symbolically, if d is a non-negative sum of ord constants."""
    if d.inf or d.const != 0:
        return None
    m = 1
    for k, c in d.coeffs:
        if not isinstance(k, OrdConst) or c < 0:
            return None
        m *= k.prime**c
    return m


def _candidates(w: WeakOrthoForm, v) -> tuple:
    cands = []
    n = 1
    for theta, phi in w.disjuncts:
        for clause in dnf_clauses(theta) or [[]]:
            L = 1
            base = []
            for lit in clause:
                base += _lower_bounds(lit, v)
                L = lcm(L, _moduli(lit, v))
            here = F.conj(*clause)
            for c in crosses_of(phi):
                if c.arg.coeff(v):
                    n = lcm(n, c.n)
                    base += [b for region, b in _window_bounds(c, v) if satisfiable(F.conj(here, region))]
            for b in base:
                for r in range(L):
                    cands.append(CeilTerm(b.num + VGTerm.lit(r * b.den), b.den) if r else b)
    out = []
    for c in cands:
        if c not in out:
            out.append(c)
    return n, out


def _merge(n: int, cands: list) -> tuple:
    """Drop candidates lying a fixed ord(m) above another; n absorbs m."""
    keep = list(cands)
    changed = True
    while changed:
        changed = False
        for a, b in itertools.permutations(keep, 2):
            d = b - a
            if d is None:
                continue
            m = _ord_gap(d)
            if m is not None:
                keep.remove(b)
                n = lcm(n, m)
                changed = True
                break
    return n, keep


# checking -----------------------------------------------------------------------------------


def _graph_points(graph, v, p, window):
    """Yield (env, value) over a window, checking that graph is a function."""
    st = QpStructure(p, vg_window=(window[0] - 12, window[1] + 12))
    g = compile_formula(graph, st)
    others = F.exists([v], graph)
    lo, hi = window
    vals = list(range(lo - 12, hi + 13)) + ([math.inf] if v.sort == VGINF else [])
    for env in assignments([others], p, window):
        hits = []
        for val in vals:
            e = dict(env)
            e[v.name] = val
            if g(e):
                hits.append(val)
        if len(hits) > 1:
            raise NotAFunction(f"graph has several values {hits[:4]} at {env}")
        if hits:
            yield env, hits[0], st


def sandwich_holds(n: int, gs: list, graph, v, p: int, window=(-5, 8)) -> bool:
    """Every graph point has some i with g_i ≤ f ≤ g_i + ord(n)."""
    K = vp(n, p)
    for env, val, st in _graph_points(graph, v, p, window):
        if val == math.inf:
            continue
        if not any(0 <= val - g.value(env, st) <= K for g in gs if g.value(env, st) != math.inf):
            return False
    return True


# public operations --------------------------------------------------------------------------


def _output_var(graph, v):
    if isinstance(v, str):
        for u in free_vars(graph):
            if u.name == v:
                return u
        raise UnsupportedAtom(f"{v} is not free in the graph")
    return v


def bound_rf_function(graph: F.Formula, v, check_primes=(2, 3)) -> tuple:
    """(n, [g_i]) with g_i(y) ≤ f(y, ξ) ≤ g_i(y) + ord(n) for some i.

    graph defines f: its free variable v is the value, the other free
    variables (value-group parameters y and residue-ring arguments ξ) are
    the inputs.  Functionality is checked on small models.
    """
    v = _output_var(graph, v)
    w = weak_ortho_normal_form(graph)
    n, cands = _candidates(w, v)
    n, gs = _merge(n, cands)
    for p in check_primes:
        for _ in _graph_points(graph, v, p, (-3, 4)):
            pass
    return n, gs


@dataclass
class LinearMap:
    """x ↦ num(x)/den on a part where den divides num."""

    num: VGTerm
    den: int = 1

    def coefficients(self, xs) -> dict:
        return {x.name: Fraction(self.num.coeff(x), self.den) for x in xs}

    def offset(self, xs) -> VGTerm:
        t = self.num
        for x in xs:
            t = t.drop(x)
        return t

    def __str__(self) -> str:
        return str(self.num) if self.den == 1 else f"({self.num})/{self.den}"


@dataclass
class LinearPart:
    guard: F.Formula  # where this piece applies (over inputs)
    g: LinearMap


def approx_linearize(graph: F.Formula, v, xs: list) -> tuple:
    """(n, parts) with 0 ≤ f − g ≤ ord(n) on every part.

    Part i collects the points where candidate i is the first one that
    works.  Candidates ⌈s/d⌉ with d > 1 are split by the residue of s mod d
    so that each piece is an exact linear map.
    """
    v = _output_var(graph, v)
    w = weak_ortho_normal_form(graph)
    n, cands = _candidates(w, v)
    n, gs = _merge(n, cands)
    K = VGTerm.ord(n) if n > 1 else VGTerm.lit(0)
    parts = []
    taken = F.FALSE
    dv = VGTerm.var(v)
    for c in gs:
        pieces = [(F.TRUE, LinearMap(c.num, 1))] if c.den == 1 else []
        if c.den > 1:
            for r in range(c.den):
                shift = (c.den - r) % c.den
                pieces.append((F.Cong(c.den, c.num, VGTerm.lit(r)), LinearMap(c.num + VGTerm.lit(shift), c.den)))
        for guard, lm in pieces:
            # den·g ≤ den·v ≤ den·g + den·K
            cond = F.conj(
                graph,
                F.Cmp("<=", lm.num, dv.scale(lm.den)),
                F.Cmp("<=", dv.scale(lm.den), lm.num + K.scale(lm.den)),
            )
            here = eliminate_all(F.conj(guard, F.exists([v], cond)))
            part = simplify(F.conj(here, F.neg(taken)))
            if part != F.FALSE:
                parts.append(LinearPart(part, lm))
            taken = simplify(F.disj(taken, here))
    return n, parts


@dataclass
class ReparamResult:
    new_vars: list  # [(ζ_j, n_j, t_j)]
    gamma: list  # [(name of γ_j, ζ_j)]: γ_j = exponent of ζ_j, +inf when ζ_j = 0
    parts: list  # [(Φ_i over ξ, ζ;  X'_i Presburger over z, γ, x)]
    certificates: list = field(default_factory=list)  # per tracked function
    trace: Trace = field(default_factory=Trace)

    def presburger_formula(self) -> F.Formula:
        return F.disj(*(x for _, x in self.parts))

    def to_json(self):
        return {
            "schema_version": 1,
            "new_vars": [{"name": z.name, "sort": str(z.sort), "cross_arg": str(t)} for z, _, t in self.new_vars],
            "gamma": [{"name": g.name, "of": z.name} for g, z in self.gamma],
            "parts": [
                {"phi": formula_to_json(ph), "presburger": formula_to_json(x), "phi_text": to_text(ph), "presburger_text": to_text(x)}
                for ph, x in self.parts
            ],
            "certificates": self.certificates,
            "trace": self.trace.to_json(),
        }


def reparameterize_linear(X: F.Formula, xs: list, tracked: list = ()) -> ReparamResult:
    """New residue-ring parameters ζ_j = cross(t_j) making X Presburger in x.

    xs are the fibre variables; every other free symbol is a parameter.
    tracked is a list of value-group terms; each gets a certificate with its
    coefficients on xs and its parameter offset.
    """
    xs = [_output_var(X, x) for x in xs]
    w = weak_ortho_normal_form(X)
    used = {u.name for u in free_vars(X)}
    new_vars, gamma, subst = [], [], {}
    for j, c in enumerate(w.crosses(), 1):
        zn, gn = f"zeta{j}", f"gamma{j}"
        while zn in used or gn in used:
            zn, gn = zn + "_", gn + "_"
        z, g = Var(zn, RF(c.n)), Var(gn, VGINF)
        new_vars.append((z, c.n, c.arg))
        gamma.append((g, z))
        subst[c] = (z, g)
    parts = []
    for theta, phi in w.disjuncts:
        phi_z = map_formula(phi, lambda a: map_rf_atom(a, lambda s: subst[s][0] if s in subst else None))
        links = []
        for c in w.crosses():
            z, g = subst[c]
            gv = VGTerm.var(g)
            links.append(
                F.disj(
                    F.conj(F.Cmp("<", gv, INF_T), F.Cmp("=", c.arg, gv)),
                    F.conj(F.Cmp("=", gv, INF_T), F.disj(F.Cmp("<", c.arg, VGTerm.lit(0)), F.Cmp("<", VGTerm.ord(c.n), c.arg))),
                )
            )
        parts.append((phi_z, simplify(F.conj(theta, *links))))
    certs = []
    for t in tracked:
        coeffs = {x.name: t.coeff(x) for x in xs}
        off = t
        for x in xs:
            off = off.drop(x)
        certs.append({"function": str(t), "coefficients": coeffs, "offset": str(off)})
    return ReparamResult(new_vars, gamma, parts, certs, w.trace)


INF_T = VGTerm((), 0, True)


def check_fiber_identity(res: ReparamResult, X: F.Formula, xs: list, p: int, window=(-3, 6)) -> bool:
    """For all parameters, ζ ∈ ∏A_{n_j} and x: (X ∧ ζ = cross(t)) ⟺ Φ(ζ) ∧ X'(γ(ζ))."""
    xs = [_output_var(X, x) for x in xs]
    st = QpStructure(p)
    zs = [z for z, _, _ in res.new_vars]
    lhs = F.conj(X, *(F.RFEq(z, _cross(n, t)) for z, n, t in res.new_vars))
    rhs = F.disj(*(F.conj(ph, x) for ph, x in res.parts))
    cl, cr = compile_formula(lhs, st), compile_formula(rhs, st)
    base = F.exists([u for u in free_vars(lhs) if u not in zs], F.TRUE)
    probe = F.conj(X, *(F.AMem(z.sort.n, z) for z in zs))
    for env in assignments([probe], p, window):
        if not all(st.in_A(z.sort.n, env[z.name]) for z in zs):
            continue
        e = dict(env)
        for (g, z) in res.gamma:
            val = env[z.name]
            e[g.name] = math.inf if val == 0 else vp(val, p)
        if cl(e) != cr(e):
            return False
    return True


def _cross(n, t):
    from ..formula.terms import Cross

    return Cross(n, t)
