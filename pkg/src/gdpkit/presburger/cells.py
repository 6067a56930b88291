"""Parametric cell decomposition of a quantifier-free Presburger set in one variable.

A cell is

    θ0(z) ∧ β1(z) ≤ c·y ≤ β2(z) ∧ y ≡ r mod ℓ

with either bound possibly absent.  The cells produced for one formula are
pairwise disjoint and their union is the solution set, fiberwise in z.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from ..errors import NotPresburger
from ..formula import formulas as F
from ..formula.arith import lcm
from ..formula.terms import Var, VGTerm
from ..formula.transform import atoms, free_vars, map_atoms, nnf, is_quantifier_free
from .linear import canon_literal, literal_to_formula, require_presburger, simplify


@dataclass(frozen=True)
class PresCell:
    guard: F.Formula
    beta1: Optional[VGTerm]
    beta2: Optional[VGTerm]
    c: int
    ell: int
    r: int
    var: Var

    def formula(self) -> F.Formula:
        """The cell as a formula in the cell variable and the parameters."""
        y = VGTerm.var(self.var).scale(self.c)
        parts = [self.guard]
        if self.beta1 is not None:
            parts.append(F.Cmp("<=", self.beta1, y))
        if self.beta2 is not None:
            parts.append(F.Cmp("<=", y, self.beta2))
        if self.ell > 1:
            parts.append(F.Cong(self.ell, VGTerm.var(self.var), VGTerm.lit(self.r)))
        return F.conj(*parts)

    def contains(self, y: int, env: dict, p: Optional[int] = None) -> bool:
        from ..formula.evaluate import evaluate

        e = dict(env)
        e[self.var.name] = y
        return evaluate(self.formula(), e, p=p)

    def sort_key(self):
        return (self.ell, self.r, str(self.beta1), str(self.beta2), str(self.guard))

    def __str__(self) -> str:
        lo = "" if self.beta1 is None else f"{self.beta1} <= "
        hi = "" if self.beta2 is None else f" <= {self.beta2}"
        cy = self.var.name if self.c == 1 else f"{self.c}*{self.var.name}"
        st = "" if self.ell == 1 else f", {self.var.name} ≡{{{self.ell}}} {self.r}"
        return f"[{self.guard}] {lo}{cy}{hi}{st}"


def _y_atoms(f, y) -> list:
    out = []
    for a in atoms(f):
        if y in free_vars(a) and a not in out:
            out.append(a)
    return out


def _assign(f, atom, value: bool):
    return simplify(map_atoms(f, lambda a: F.Const(value) if a == atom else a))


def _paths(f, y, lits, out):
    """Shannon expansion on the y-atoms; appends (literals, guard) pairs."""
    if f == F.FALSE:
        return
    ys = _y_atoms(f, y)
    if not ys:
        out.append((list(lits), f))
        return
    a = ys[0]
    _paths(_assign(f, a, True), y, lits + [(a, True)], out)
    _paths(_assign(f, a, False), y, lits + [(a, False)], out)


def _expand_literals(lits):
    """Turn signed atoms into lists of canonical literals (¬= splits in two)."""
    branches = [[]]
    for a, val in lits:
        lit = a if val else F.Not(a)
        c = canon_literal(lit)
        if c is not None:
            branches = [b + [c] for b in branches]
            continue
        # ¬(s = t): s < t or t < s, disjoint
        t = a.rhs - a.lhs
        branches = [b + [x] for b in branches for x in (("lt", t), ("lt", -t))]
    return branches


def _extremal_split(bounds, upper: bool):
    """Disjoint case split on which bound a·y ≥ b (or a·y ≤ b) is binding.

    Bounds are compared as rationals b/a.  Earlier indices must be strictly
    weaker, later ones at most equal, so exactly one case applies.
    """
    for i, (ai, bi) in enumerate(bounds):
        guard = []
        for j, (aj, bj) in enumerate(bounds):
            if j == i:
                continue
            si, sj = bi.scale(aj), bj.scale(ai)
            lo, hi = (si, sj) if upper else (sj, si)
            guard.append(F.Cmp("<" if j < i else "<=", lo, hi))
        yield i, guard


def _dedup(xs):
    out = []
    for x in xs:
        if x not in out:
            out.append(x)
    return out


def _cells_of_branch(lits, guard0, y) -> list:
    lows, ups, congs = [], [], []
    for lit in lits:
        kind = lit[0]
        t = lit[1] if kind in ("lt", "eq") else lit[2]
        a = t.coeff(y)
        rest = t.drop(y)
        if kind in ("dvd", "ndvd"):
            congs.append((kind, lit[1], a, rest))
        elif kind == "lt":
            # 0 < a*y + rest
            if a > 0:
                lows.append((a, -rest + 1))
            else:
                ups.append((-a, rest - 1))
        else:
            if a > 0:
                lows.append((a, -rest))
                ups.append((a, -rest))
            else:
                lows.append((-a, rest))
                ups.append((-a, rest))
    lows, ups = _dedup(lows), _dedup(ups)
    M = 1
    for _, d, a, _ in congs:
        M = lcm(M, d // gcd(d, a % d or d))
    out = []
    low_cases = list(_extremal_split(lows, False)) if lows else [(None, [])]
    up_cases = list(_extremal_split(ups, True)) if ups else [(None, [])]
    for r in range(M):
        cg = [literal_to_formula((kind, d, rest + a * r)) for kind, d, a, rest in congs]
        g_r = simplify(F.conj(guard0, *cg))
        if g_r == F.FALSE:
            continue
        for i, gl in low_cases:
            for j, gu in up_cases:
                g = simplify(F.conj(g_r, *gl, *gu))
                if g == F.FALSE:
                    continue
                c = lcm(lows[i][0] if i is not None else 1, ups[j][0] if j is not None else 1)
                b1 = lows[i][1].scale(c // lows[i][0]) if i is not None else None
                b2 = ups[j][1].scale(c // ups[j][0]) if j is not None else None
                if b1 is not None and b2 is not None and (b2 - b1).is_integer() and (b2 - b1).const < 0:
                    continue
                out.append(PresCell(g, b1, b2, c, M, r, y))
    return out


def pres_cells(f: F.Formula, y: Var) -> list:
    """Disjoint cells covering the solution set of f in y, fiberwise."""
    require_presburger(f)
    if not is_quantifier_free(f):
        raise NotPresburger("pres_cells expects a quantifier-free formula")
    if not y.sort.is_vg:
        raise NotPresburger(f"{y} is not a value-group variable")
    f = simplify(nnf(f))
    paths = []
    _paths(f, y, [], paths)
    cells = []
    for lits, guard in paths:
        for branch in _expand_literals(lits):
            cells.extend(_cells_of_branch(branch, guard, y))
    cells.sort(key=PresCell.sort_key)
    return cells
