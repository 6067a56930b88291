"""Rectilinearization of parametric Presburger sets.

A set X ⊂ params × ℤ^m is cut into pieces A, each with an affine bijection
ρ (rational coefficients, integral on A) such that ρ(A_y) = Λ_y × ℕ^ℓ with
Λ_y finite.  The construction goes through one-variable cells: a bounded
cell becomes a Λ coordinate u = (x − r)/ℓ, a half-line cell becomes an ℕ
coordinate after subtracting the least admissible value.  The least value
involves a ceiling, which is made linear by splitting on the class of the
bound modulo c·ℓ.

Coordinates are processed from last to first.  A bounded coordinate whose
bounds mention a coordinate that ends up free would break the product
shape; other coordinate orders are then tried.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import ceil, floor
from typing import Optional

from ..errors import NotPresburger, NotRectilinearizable
from ..formula import formulas as F
from ..formula.sorts import VG
from ..formula.terms import Var, VGTerm
from ..formula.transform import free_vars, is_quantifier_free
from .cells import pres_cells
from .linear import LinForm, require_presburger, simplify


@dataclass(frozen=True)
class _Coord:
    kind: str  # 'bounded' | 'low' | 'up'
    var: Var
    c: int
    ell: int
    r: int
    beta1: Optional[VGTerm]
    beta2: Optional[VGTerm]
    s: int = 0

    def rho(self) -> LinForm:
        x = LinForm.var(self.var)
        u = (x - self.r).scale(Fraction(1, self.ell))
        if self.kind == "bounded":
            return u
        m = self.c * self.ell
        if self.kind == "low":
            kappa = ceil(Fraction(self.s - self.c * self.r, m))
            return u - (LinForm.from_vg(self.beta1) - self.s).scale(Fraction(1, m)) - kappa
        kappa = floor(Fraction(self.s - self.c * self.r, m))
        return (LinForm.from_vg(self.beta2) - self.s).scale(Fraction(1, m)) + kappa - u

    def inverse(self, out: Var, sub: dict) -> LinForm:
        """x as a function of its output coordinate, other x's given by sub."""
        w = LinForm.var(out)
        if self.kind == "bounded":
            return w.scale(self.ell) + self.r
        m = self.c * self.ell
        if self.kind == "low":
            kappa = ceil(Fraction(self.s - self.c * self.r, m))
            b = LinForm.from_vg(self.beta1).substitute_many(sub)
            return (w + (b - self.s).scale(Fraction(1, m)) + kappa).scale(self.ell) + self.r
        kappa = floor(Fraction(self.s - self.c * self.r, m))
        b = LinForm.from_vg(self.beta2).substitute_many(sub)
        return ((b - self.s).scale(Fraction(1, m)) + kappa - w).scale(self.ell) + self.r

    def cell_formula(self) -> F.Formula:
        y = VGTerm.var(self.var).scale(self.c)
        parts = []
        if self.beta1 is not None:
            parts.append(F.Cmp("<=", self.beta1, y))
        if self.beta2 is not None:
            parts.append(F.Cmp("<=", y, self.beta2))
        if self.ell > 1:
            parts.append(F.Cong(self.ell, VGTerm.var(self.var), VGTerm.lit(self.r)))
        m = self.c * self.ell
        if self.kind == "low" and m > 1:
            parts.append(F.Cong(m, self.beta1, VGTerm.lit(self.s)))
        if self.kind == "up" and m > 1:
            parts.append(F.Cong(m, self.beta2, VGTerm.lit(self.s)))
        return F.conj(*parts)


@dataclass
class RectiPiece:
    """One piece A with ρ(A_y) = Λ_y × ℕ^free_dim."""

    part: F.Formula
    xs: list
    rho: list  # LinForm per output coordinate, bounded ones first
    rho_inv: dict  # x name -> LinForm over output coordinates and parameters
    lam_vars: list
    free_vars: list
    Lambda: F.Formula
    coords: list = field(default_factory=list, repr=False)

    @property
    def free_dim(self) -> int:
        return len(self.free_vars)

    def apply(self, point: dict, ord_const=None) -> tuple:
        vals = []
        for r in self.rho:
            v = r.evaluate(point, ord_const)
            if v.denominator != 1:
                raise ValueError(f"ρ is not integral at {point}")
            vals.append(int(v))
        return tuple(vals)

    def invert(self, image: tuple, params: dict, ord_const=None) -> dict:
        env = dict(params)
        for v, val in zip(self.lam_vars + self.free_vars, image):
            env[v.name] = val
        out = {}
        for x in self.xs:
            val = self.rho_inv[x.name].evaluate(env, ord_const)
            if val.denominator != 1:
                raise ValueError("inverse image is not integral")
            out[x.name] = int(val)
        return out

    def to_json(self):
        from ..formula.serialize import formula_to_json

        return {
            "part": formula_to_json(self.part),
            "coordinates": [x.name for x in self.xs],
            "rho": [r.to_json() for r in self.rho],
            "rho_inverse": {k: v.to_json() for k, v in sorted(self.rho_inv.items())},
            "lambda_vars": [v.name for v in self.lam_vars],
            "free_vars": [v.name for v in self.free_vars],
            "Lambda": formula_to_json(self.Lambda),
            "free_dim": self.free_dim,
        }

    def __str__(self) -> str:
        rho = ", ".join(str(r) for r in self.rho)
        lam = ", ".join(v.name for v in self.lam_vars)
        return f"A: {self.part}\n  ρ = ({rho})\n  Λ[{lam}]: {self.Lambda}\n  ℓ = {self.free_dim}"


def _coords_of_cell(cell) -> list:
    """Split one cell into coordinate descriptors plus residual guards."""
    x = cell.var
    if cell.beta1 is not None and cell.beta2 is not None:
        return [_Coord("bounded", x, cell.c, cell.ell, cell.r, cell.beta1, cell.beta2)]
    if cell.beta1 is not None:
        m = cell.c * cell.ell
        return [_Coord("low", x, cell.c, cell.ell, cell.r, cell.beta1, None, s) for s in range(m)]
    if cell.beta2 is not None:
        m = cell.c * cell.ell
        return [_Coord("up", x, cell.c, cell.ell, cell.r, None, cell.beta2, s) for s in range(m)]
    # the whole residue class: split at 0
    out = []
    for s in range(cell.ell):
        out.append(_Coord("low", x, 1, cell.ell, cell.r, VGTerm.lit(0), None, s))
        out.append(_Coord("up", x, 1, cell.ell, cell.r, None, VGTerm.lit(-1), s))
    return out


def _residual(coord: _Coord) -> list:
    m = coord.c * coord.ell
    if coord.kind == "low" and m > 1:
        return [F.Cong(m, coord.beta1, VGTerm.lit(coord.s))]
    if coord.kind == "up" and m > 1:
        return [F.Cong(m, coord.beta2, VGTerm.lit(coord.s))]
    return []


def _decompose(X, order: list) -> list:
    """List of (param guard, coords) with coords in processing order."""
    X = simplify(X)
    if X == F.FALSE:
        return []
    if not order:
        return [(X, [])]
    x = order[-1]
    out = []
    for cell in pres_cells(X, x):
        for coord in _coords_of_cell(cell):
            sub = simplify(F.conj(cell.guard, *_residual(coord)))
            for guard, coords in _decompose(sub, order[:-1]):
                out.append((guard, coords + [coord]))
    return out


def _valid(coords) -> bool:
    bounded = {c.var for c in coords if c.kind == "bounded"}
    xs = {c.var for c in coords}
    for c in coords:
        if c.kind != "bounded":
            continue
        for b in (c.beta1, c.beta2):
            for v in b.variables():
                if v in xs and v not in bounded:
                    return False
    return True


def _build(guard, coords, xs) -> RectiPiece:
    by_var = {c.var: c for c in coords}
    lam_vars, free_out = [], []
    out_var = {}
    for x in xs:
        c = by_var[x]
        if c.kind == "bounded":
            out_var[x] = Var(f"u_{x.name}", VG)
            lam_vars.append(out_var[x])
        else:
            out_var[x] = Var(f"w_{x.name}", VG)
            free_out.append(out_var[x])
    rho = [by_var[x].rho() for x in xs if by_var[x].kind == "bounded"]
    rho += [by_var[x].rho() for x in xs if by_var[x].kind != "bounded"]
    # coords are listed innermost first, so inverses build up in that order
    inv: dict = {}
    for c in coords:
        inv[c.var] = c.inverse(out_var[c.var], dict(inv))
    rho_inv = {x.name: inv[x] for x in xs}
    lam = [guard]
    for c in coords:
        if c.kind != "bounded":
            continue
        sub = {v: inv[v].to_vg() for v in by_var if by_var[v].kind == "bounded"}
        y = (VGTerm.var(out_var[c.var]).scale(c.ell) + c.r).scale(c.c)
        b1, b2 = c.beta1, c.beta2
        for v, t in sub.items():
            b1 = b1.substitute(v, t)
            b2 = b2.substitute(v, t)
        lam += [F.Cmp("<=", b1, y), F.Cmp("<=", y, b2)]
    part = F.conj(guard, *(c.cell_formula() for c in reversed(coords)))
    return RectiPiece(part, list(xs), rho, rho_inv, lam_vars, free_out, simplify(F.conj(*lam)), list(coords))


def rectilinearize(X: F.Formula, xs: list) -> list:
    """Pieces partitioning X (a set in the coordinates xs, other variables are
    parameters), each mapped bijectively onto Λ_y × ℕ^ℓ."""
    require_presburger(X)
    if not is_quantifier_free(X):
        from .cooper import pres_qe

        X = pres_qe(X)
    xs = list(xs)
    for x in xs:
        if not x.sort.is_vg:
            raise NotPresburger(f"{x} is not a value-group coordinate")
    tried = []
    for order in permutations(xs):
        raw = _decompose(X, list(order))
        if all(_valid(coords) for _, coords in raw):
            return [_build(g, coords, xs) for g, coords in raw]
        tried.append([x.name for x in order])
    raise NotRectilinearizable(f"no coordinate order gives a product decomposition (tried {tried})")
