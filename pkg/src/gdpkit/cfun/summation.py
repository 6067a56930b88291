"""Summation of C-class functions over value-group variables, and loci.

One variable y at a time:

1. Count factors that depend on y are split so that y only occurs in a
   Presburger region: each cross_n(a·y + u) is either outside its window
   (value 0) or pinned to a value g ∈ [0, ord n]; value-group atoms are
   pulled out of residue-ring quantifiers and decided case by case.
2. Each resulting term is Σ_d E_d(x) y^d q^(b y) t^(b' y) on a Presburger
   region, which is cut into cells β1 ≤ c·y ≤ β2, y ≡ r mod ℓ (for y ≥ 0,
   and for y < 0 after y ↦ −y).
3. On a half-line starting at Y0 the sum is
   q^(b Y0) t^(b' Y0) Σ_i Δ^i Q(0) T^i / (1 − T)^(i+1),  T = q^(bℓ) t^(b'ℓ),
   Q(k) = P(Y0 + ℓk); a bounded cell is the difference of two half-lines.
   Polynomial tails (T = 1) are cut at the largest cell bound, beyond which
   a convergent sum has no mass.
"""
from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from functools import lru_cache
from math import ceil, comb, factorial, floor
from typing import Optional

from ..errors import ModelRequired, NotFiberConstant, NotRectilinearizable
from ..formula import formulas as F
from ..formula.arith import factorize, lcm
from ..formula.terms import Cross, RFLit, Var, VGTerm
from ..formula.transform import atom_vars, free_vars, quantifiers, substitute
from ..presburger.cells import pres_cells
from ..presburger.linear import LinForm, is_presburger, simplify
from ..vgqe.eliminate import (
    _vg_atoms,
    crosses_of,
    eliminate_all,
    hoist,
    is_vg_atom,
    map_formula,
    map_rf_atom,
    set_atom,
    tidy,
)
from ..vgqe.reparam import satisfiable
from .aring import ATerm
from .cterm import CFunction, CountFactor, CTerm, as_cfun
from .trl import delta_monomial_at_zero

INT, BDD, IVA = "INT", "BDD", "IVA"


# splitting count factors ------------------------------------------------------------------


def _has_y(t: VGTerm, y: Var) -> bool:
    return bool(t.coeff(y))


def _shannon(f, y, vars_):
    """[(region, CountFactor or None)] with the y-atoms of f moved to the region."""
    if isinstance(f, F.And):
        pure = [a for a in f.args if not quantifiers(a) and all(is_vg_atom(b) for b in _atoms(a))]
        rest = [a for a in f.args if a not in pure]
        if pure:
            return [(F.conj(*pure, reg), cf) for reg, cf in _shannon(F.conj(*rest), y, vars_)]
    found = _vg_atoms(f, lambda a: y in atom_vars(a))
    if not found:
        f = simplify(f)
        if f == F.FALSE:
            return []
        if f == F.TRUE and not vars_:
            return [(F.TRUE, None)]
        return [(F.TRUE, CountFactor(f, vars_))]
    g = found[0]
    out = []
    for lit, val in ((g, True), (F.neg(g), False)):
        h = simplify(set_atom(f, g, val))
        if h == F.FALSE:
            continue
        out.extend((F.conj(lit, reg), cf) for reg, cf in _shannon(h, y, vars_))
    return out


def _atoms(f):
    from ..formula.transform import atoms

    return atoms(f)


def _split_crosses(f, y, vars_):
    pending = [c for c in crosses_of(f) if isinstance(c, Cross) and _has_y(c.arg, y)]
    if not pending:
        if vars_:
            f = hoist(f, lambda a: y in atom_vars(a))
        return _shannon(f, y, vars_)
    c = pending[0]
    t, k = c.arg, VGTerm.ord(c.n)
    out = []
    zero = RFLit(0, c.n)
    outside = tidy(map_formula(f, lambda a: map_rf_atom(a, lambda s: zero if s == c else None)))
    region = F.disj(F.Cmp("<", t, VGTerm.lit(0)), F.Cmp("<", k, t))
    out.extend((F.conj(region, reg), cf) for reg, cf in _split_crosses(outside, y, vars_))
    top = max((e for _, e in factorize(c.n)), default=0)
    for g in range(top + 1):
        fixed = Cross(c.n, VGTerm.lit(g))
        inside = tidy(map_formula(f, lambda a, fixed=fixed: map_rf_atom(a, lambda s: fixed if s == c else None)))
        region = F.conj(F.Cmp("=", t, VGTerm.lit(g)), F.Cmp("<=", VGTerm.lit(g), k))
        out.extend((F.conj(region, reg), cf) for reg, cf in _split_crosses(inside, y, vars_))
    return out


def _split_count(cf: CountFactor, y: Var):
    f = cf.formula
    if any(q.var.sort.is_vg for q in quantifiers(f)):
        f = eliminate_all(f)
    return _split_crosses(f, y, cf.vars)


def fiber_pieces(term: CTerm, y: Var) -> list:
    """[(region, term')] where term' has no count factor depending on y and
    term = Σ [region]·term' pointwise."""
    fixed = [c for c in term.counts if y not in c.free()]
    moving = [c for c in term.counts if y in c.free()]
    pieces = [(F.TRUE, [])]
    for cf in moving:
        new = []
        for region, cs in pieces:
            for reg, c2 in _split_count(cf, y):
                r2 = simplify(F.conj(region, reg))
                if r2 != F.FALSE:
                    new.append((r2, cs + ([c2] if c2 is not None else [])))
        pieces = new
    return [(region, replace(term, counts=tuple(fixed + cs))) for region, cs in pieces]


# terms as polynomials in y ------------------------------------------------------------------------


def _drop(L: LinForm, y) -> LinForm:
    return L.substitute(y, LinForm())


def y_polynomial(term: CTerm, y: Var):
    """(b, b', [E_0, E_1, ...]) with term = Σ_d E_d y^d q^(b y) t^(b' y)."""
    b, bs = term.beta.coeff(y), term.sigma.coeff(y)
    base = replace(term, beta=_drop(term.beta, y), sigma=_drop(term.sigma, y), alphas=())
    poly = [CFunction.make([base])]
    for L in term.alphas:
        cy, L0 = L.coeff(y), _drop(L, y)
        new = [CFunction() for _ in range(len(poly) + (1 if cy else 0))]
        for d, E in enumerate(poly):
            if L0.coeffs or L0.const:
                new[d] = new[d] + E * CFunction.lin(L0)
            if cy:
                new[d + 1] = new[d + 1] + E * CFunction.const(cy)
        poly = new
    return Fraction(b), Fraction(bs), poly


def _reflect(region, poly, b, bs, y):
    region = substitute(region, y, VGTerm.var(y).scale(-1))
    poly = [E if d % 2 == 0 else -E for d, E in enumerate(poly)]
    return region, poly, -b, -bs


# closed forms ----------------------------------------------------------------------------------------


def _lin(t: VGTerm) -> LinForm:
    return LinForm.from_vg(t)


def _int_form(L: LinForm) -> tuple:
    """(D, VGTerm) with D·L = VGTerm integral, D > 0."""
    D = L.denominator()
    return D, L.scale(D).to_vg()


def _t_factor(b: Fraction, bs: Fraction, ell: int, i: int) -> CTerm:
    """T^i / (1 − T)^(i+1) with T = q^(bℓ) t^(b'ℓ), T ≠ 1."""
    a, k = b * ell, bs * ell
    if k == 0:
        if a < 0:
            geo = ATerm.make({0: 1}, [-a] * (i + 1))
            return CTerm(ATerm.qpower(i * a) * geo)
        # 1/(1 − q^a) = −q^(−a) / (1 − q^(−a))
        geo = ATerm.make({0: 1}, [a] * (i + 1))
        return CTerm(ATerm.qpower(i * a - (i + 1) * a, (-1) ** (i + 1)) * geo)
    return CTerm(
        ATerm.qpower(i * a),
        sigma=LinForm.const_(i * k),
        sden=tuple((a, -k) for _ in range(i + 1)),
    )


def _delta_q(poly, Y: LinForm, ell: int, i: int) -> CFunction:
    """Δ^i Q(0) for Q(k) = Σ_d E_d (Y + ℓk)^d."""
    out = CFunction()
    ylin = CFunction.lin(Y) if (Y.coeffs or Y.const) else CFunction.const(0)
    for d, E in enumerate(poly):
        if E.is_zero():
            continue
        for e in range(i, d + 1):
            c = comb(d, e) * ell**e * delta_monomial_at_zero(e, i)
            if c == 0:
                continue
            out = out + E * CFunction.const(c) * (ylin ** (d - e))
    return out


def _half_line(poly, b, bs, Y: LinForm, ell: int) -> CFunction:
    """Σ_{k ≥ 0} P(Y + ℓk) q^(b(Y+ℓk)) t^(b'(Y+ℓk)) as a rational closed form."""
    pre = CFunction.make([CTerm(beta=Y.scale(b), sigma=Y.scale(bs))])
    out = CFunction()
    for i in range(len(poly)):
        dq = _delta_q(poly, Y, ell, i)
        if dq.is_zero():
            continue
        out = out + dq * CFunction.make([_t_factor(b, bs, ell, i)])
    return pre * out


def _finite_poly_sum(poly, Y0: LinForm, K: LinForm, ell: int) -> CFunction:
    """Σ_{k=0}^{K} P(Y0 + ℓk) = Σ_i Δ^i Q(0) · C(K+1, i+1), for K ≥ 0."""
    out = CFunction()
    for i in range(len(poly)):
        dq = _delta_q(poly, Y0, ell, i)
        if dq.is_zero():
            continue
        binom = CTerm(
            ATerm.const(Fraction(1, factorial(i + 1))),
            alphas=tuple(K + LinForm.const_(1 - j) for j in range(i + 1)),
        )
        out = out + dq * CFunction.make([binom])
    return out


def _start(cell, s: int) -> LinForm:
    """Least y ≡ r (mod ℓ) with c·y ≥ β1, given β1 ≡ s (mod cℓ)."""
    m = cell.c * cell.ell
    kappa = ceil(Fraction(s - cell.c * cell.r, m))
    return (_lin(cell.beta1) - LinForm.const_(s)).scale(Fraction(1, cell.c)) + LinForm.const_(cell.ell * kappa + cell.r)


def _end(cell, s: int) -> LinForm:
    m = cell.c * cell.ell
    kappa = floor(Fraction(s - cell.c * cell.r, m))
    return (_lin(cell.beta2) - LinForm.const_(s)).scale(Fraction(1, cell.c)) + LinForm.const_(cell.ell * kappa + cell.r)


def _classes(cell, beta):
    m = cell.c * cell.ell
    if m == 1:
        return [(0, F.TRUE)]
    return [(s, F.Cong(m, beta, VGTerm.lit(s))) for s in range(m)]


@lru_cache(maxsize=8192)
def _feasible(guard) -> bool:
    if guard == F.FALSE:
        return False
    if guard == F.TRUE or not is_presburger(guard):
        return True
    return satisfiable(guard)


def prune(f: CFunction) -> CFunction:
    """Drop terms whose indicator is unsatisfiable."""
    keep = []
    for t in f.terms:
        if all(c.vars or _feasible(c.formula) for c in t.counts):
            keep.append(t)
    return CFunction.make(keep, f.domain)


def _cell_sum(cell, poly, b, bs) -> CFunction:
    unit = b == 0 and bs == 0
    out = CFunction()
    for s1, g1 in _classes(cell, cell.beta1):
        Y0 = _start(cell, s1)
        if cell.beta2 is None:
            if unit:
                raise NotRectilinearizable("polynomial tail left untruncated")
            guard = simplify(F.conj(cell.guard, g1))
            if not _feasible(guard):
                continue
            ind = CFunction.indicator(guard)
            out = out + ind * _half_line(poly, b, bs, Y0, cell.ell)
            continue
        for s2, g2 in _classes(cell, cell.beta2):
            Y1 = _end(cell, s2)
            D, gap = _int_form((Y1 - Y0).scale(cell.c))
            nonempty = F.Cmp("<=", VGTerm.lit(0), gap)
            guard = simplify(F.conj(cell.guard, g1, g2, nonempty))
            if not _feasible(guard):
                continue
            ind = CFunction.indicator(guard)
            if unit:
                K = (Y1 - Y0).scale(Fraction(1, cell.ell))
                out = out + ind * _finite_poly_sum(poly, Y0, K, cell.ell)
            else:
                after = Y1 + LinForm.const_(cell.ell)
                out = out + ind * (_half_line(poly, b, bs, Y0, cell.ell) - _half_line(poly, b, bs, after, cell.ell))
    return out


# the analysis of one variable -------------------------------------------------------------------------


def _items(f: CFunction, y: Var, fiber_constant: bool) -> list:
    f = f.absorb_domain()
    items = []
    for term in f.terms:
        for ch in term.chars:
            if y in ch.free():
                raise NotFiberConstant(f"character factor {ch} depends on {y}")
        if fiber_constant:
            for c in term.counts:
                if y in c.free() and (c.vars or any(not is_vg_atom(a) for a in _atoms(c.formula))):
                    raise NotFiberConstant(f"count factor {c} depends on {y}")
        for region, t2 in fiber_pieces(term, y):
            b, bs, poly = y_polynomial(t2, y)
            items.append((region, poly, b, bs))
    return items


def _halves(items, y):
    """[(half_items)] for y ≥ 0 and for y ≤ −1 written in −y; each half item is
    (cells, poly, b, b')."""
    out = []
    for sign in (1, -1):
        half = []
        for region, poly, b, bs in items:
            if sign == -1:
                region, poly, b, bs = _reflect(region, poly, b, bs, y)
                lo = F.Cmp("<=", VGTerm.lit(1), VGTerm.var(y))
            else:
                lo = F.Cmp("<=", VGTerm.lit(0), VGTerm.var(y))
            R = simplify(F.conj(region, lo))
            if R == F.FALSE:
                continue
            half.append((R, pres_cells(R, y), poly, b, bs))
        out.append(half)
    return out


def _bound_forms(cells) -> list:
    out = []
    for cell in cells:
        for beta in (cell.beta1, cell.beta2):
            if beta is not None:
                L = _lin(beta).scale(Fraction(1, cell.c))
                if L not in out:
                    out.append(L)
    return out


def _truncate(half, y):
    """Cut polynomial (T = 1) tails at the largest finite cell bound."""
    poly_tails = [it for it in half if it[3] == 0 and it[4] == 0 and any(c.beta2 is None for c in it[1])]
    if not poly_tails:
        return half
    bounds = []
    for it in poly_tails:
        for L in _bound_forms(it[1]):
            if L not in bounds:
                bounds.append(L)
    rest = [it for it in half if it not in poly_tails]
    for R, _, poly, b, bs in poly_tails:
        for j, Bj in enumerate(bounds):
            conds = []
            for k, Bk in enumerate(bounds):
                if k == j:
                    continue
                _, diff = _int_form(Bj - Bk)
                conds.append(F.Cmp("<" if k < j else "<=", VGTerm.lit(0), diff))
            D, top = _int_form(Bj)
            cut = F.Cmp("<=", VGTerm.var(y).scale(D), top)
            R2 = simplify(F.conj(R, cut, *conds))
            if R2 != F.FALSE:
                rest.append((R2, pres_cells(R2, y), poly, b, bs))
    return rest


def sum_fiber(f, y: Var, fiber_constant: bool = False) -> CFunction:
    """Σ_{y ∈ VG} f(x, y) wherever it converges (any value elsewhere)."""
    f = as_cfun(f)
    total = CFunction()
    for half in _halves(_items(f, y, fiber_constant), y):
        for _, cells, poly, b, bs in _truncate(half, y):
            for cell in cells:
                total = total + _cell_sum(cell, poly, b, bs)
    return prune(total)


# loci -----------------------------------------------------------------------------------------------


def _bad(mode: str, d: int, b: Fraction, bs: Fraction) -> bool:
    if bs != 0:
        return bs < 0
    if mode == INT:
        return b >= 0
    return b > 0 or (b == 0 and d > 0)


def _tail_locus(f, y, mode) -> CFunction:
    out = CFunction()
    for half in _halves(_items(f, y, False), y):
        tails = [(cell, poly, b, bs) for _, cells, poly, b, bs in half for cell in cells if cell.beta2 is None]
        if not tails:
            continue
        L = lcm(*(cell.ell for cell, *_ in tails))
        for r in range(L):
            groups: dict = {}
            for cell, poly, b, bs in tails:
                if r % cell.ell != cell.r:
                    continue
                ind = CFunction.indicator(cell.guard)
                for d, E in enumerate(poly):
                    if not E.is_zero() and _bad(mode, d, b, bs):
                        key = (d, b, bs)
                        groups[key] = groups.get(key, CFunction()) + ind * E
            for C in groups.values():
                out = out + C * C
    return prune(out)


def locus(f, y, mode: str = INT) -> CFunction:
    """A C-class h in the parameters whose zero set is the locus where the
    fiber function of f in y is integrable (INT), bounded (BDD) or
    identically zero (IVA)."""
    f = as_cfun(f)
    ys = list(y) if isinstance(y, (list, tuple)) else [y]
    if len(ys) != 1:
        raise NotRectilinearizable("loci are implemented for one summation variable")
    (y,) = ys
    if f.has_psi:
        raise ModelRequired("loci of functions with character factors need a fixed model")
    mode = mode.upper()
    if mode in (INT, BDD):
        return _tail_locus(f, y, mode)
    if mode != IVA:
        raise ValueError(f"unknown locus mode {mode}")
    if f.has_s:
        raise ModelRequired("the IVA locus needs an s-free function")
    top = Fraction(0)
    for term in f.absorb_domain().terms:
        top = max(top, abs(term.beta.coeff(y)))
    weight = 2 * top + 1
    sq = f * f
    out = CFunction()
    for sign in (1, -1):
        w = CFunction.make([CTerm(beta=LinForm.make({y: -sign * weight}))])
        side = F.Cmp("<=", VGTerm.lit(0), VGTerm.var(y).scale(sign)) if sign == 1 else F.Cmp("<", VGTerm.var(y), VGTerm.lit(0))
        out = out + sum_fiber(sq * w * CFunction.indicator(side), y)
    return out


# public entry points -----------------------------------------------------------------------------------


def sum_over_interval(f, y: Var, lower, upper=None):
    """(g, locus) with g = Σ_{lower ≤ y ≤ upper} f where the sum converges and
    locus the INT locus (zero exactly where it converges)."""
    f = as_cfun(f)
    lo = lower if isinstance(lower, VGTerm) else LinForm(lower.coeffs, lower.const).to_vg() if isinstance(lower, LinForm) else VGTerm.lit(int(lower))
    parts = [F.Cmp("<=", lo, VGTerm.var(y))]
    if upper is not None:
        hi = upper if isinstance(upper, VGTerm) else upper.to_vg() if isinstance(upper, LinForm) else VGTerm.lit(int(upper))
        parts.append(F.Cmp("<=", VGTerm.var(y), hi))
    for term in f.absorb_domain().terms:
        for c in term.counts:
            if y in c.free() and (c.vars or any(not is_vg_atom(a) for a in _atoms(c.formula))):
                raise NotFiberConstant(f"count factor {c} depends on {y}")
        for ch in term.chars:
            if y in ch.free():
                raise NotFiberConstant(f"character factor {ch} depends on {y}")
    g = f * CFunction.indicator(F.conj(*parts))
    return sum_fiber(g, y, fiber_constant=True), locus(g, y, INT) if not g.has_psi else CFunction()


def sum_over_vg(f, ys, mode: str = INT):
    """(g, locus): iterated fiber sums over the value-group variables ys.

    The locus is returned for a single variable; with several variables the
    second component is None."""
    f = as_cfun(f)
    ys = list(ys) if isinstance(ys, (list, tuple)) else [ys]
    if not ys:
        return f, CFunction()
    h = locus(f, ys[0], mode) if len(ys) == 1 and not f.has_psi else None
    g = f
    for y in reversed(ys):
        g = sum_fiber(g, y)
    return g, h
