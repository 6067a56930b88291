"""Linear forms with rational coefficients and Presburger atom normalization."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from ..errors import NotPresburger
from ..formula import formulas as F
from ..formula.terms import OrdConst, Var, VGTerm, _key_rank


@dataclass(frozen=True)
class LinForm:
    """Σ c_k·k + c0 with rational coefficients; keys as in VGTerm."""

    coeffs: tuple = ()
    const: Fraction = Fraction(0)

    @staticmethod
    def make(d: dict, const=0) -> "LinForm":
        items = sorted(((k, Fraction(c)) for k, c in d.items() if c), key=lambda kc: _key_rank(kc[0]))
        return LinForm(tuple(items), Fraction(const))

    @staticmethod
    def from_vg(t: VGTerm) -> "LinForm":
        if t.inf:
            raise ValueError("+inf has no linear form")
        return LinForm.make(dict(t.coeffs), t.const)

    @staticmethod
    def const_(c) -> "LinForm":
        return LinForm((), Fraction(c))

    @staticmethod
    def var(v) -> "LinForm":
        return LinForm.make({v: 1})

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def coeff(self, k) -> Fraction:
        for kk, c in self.coeffs:
            if kk == k:
                return c
        return Fraction(0)

    def keys(self) -> set:
        return {k for k, _ in self.coeffs}

    def __add__(self, o: "LinForm") -> "LinForm":
        o = as_lin(o)
        d = self.as_dict()
        for k, c in o.coeffs:
            d[k] = d.get(k, 0) + c
        return LinForm.make(d, self.const + o.const)

    __radd__ = __add__

    def __neg__(self) -> "LinForm":
        return LinForm(tuple((k, -c) for k, c in self.coeffs), -self.const)

    def __sub__(self, o) -> "LinForm":
        return self + (-as_lin(o))

    def __rsub__(self, o) -> "LinForm":
        return as_lin(o) - self

    def scale(self, r) -> "LinForm":
        r = Fraction(r)
        if r == 0:
            return LinForm()
        return LinForm(tuple((k, c * r) for k, c in self.coeffs), self.const * r)

    def __mul__(self, r):
        return self.scale(r)

    __rmul__ = __mul__

    def substitute(self, k, form: "LinForm") -> "LinForm":
        c = self.coeff(k)
        if not c:
            return self
        return LinForm.make({kk: cc for kk, cc in self.coeffs if kk != k}, self.const) + as_lin(form).scale(c)

    def substitute_many(self, mapping: dict) -> "LinForm":
        out = LinForm.make({k: c for k, c in self.coeffs if k not in mapping}, self.const)
        for k, c in self.coeffs:
            if k in mapping:
                out = out + as_lin(mapping[k]).scale(c)
        return out

    def denominator(self) -> int:
        d = self.const.denominator
        for _, c in self.coeffs:
            d = d * c.denominator // gcd(d, c.denominator)
        return d

    def is_integral(self) -> bool:
        return self.denominator() == 1

    def to_vg(self) -> VGTerm:
        if not self.is_integral():
            raise ValueError(f"linear form {self} has non-integral coefficients")
        return VGTerm.make({k: int(c) for k, c in self.coeffs}, int(self.const))

    def evaluate(self, env: dict, ord_const=None) -> Fraction:
        s = self.const
        for k, c in self.coeffs:
            if isinstance(k, OrdConst):
                if ord_const is None:
                    raise KeyError(str(k))
                s += c * ord_const(k.prime)
            else:
                name = k.name if isinstance(k, Var) else k.label
                s += c * env[name]
        return s

    def __str__(self) -> str:
        from ..formula.printer import _key_str

        parts = []
        for k, c in self.coeffs:
            mag = abs(c)
            body = _key_str(k) if mag == 1 else f"{mag}*{_key_str(k)}"
            parts.append(("-" if c < 0 else "+", body))
        if self.const or not parts:
            parts.append(("-" if self.const < 0 else "+", str(abs(self.const))))
        s0, b0 = parts[0]
        out = ("-" if s0 == "-" else "") + b0
        for s, b in parts[1:]:
            out += f" {s} {b}"
        return out

    def to_json(self):
        from ..formula.serialize import _key_to_json

        return {"coeffs": [[_key_to_json(k), frac_str(c)] for k, c in self.coeffs], "const": frac_str(self.const)}

    @staticmethod
    def from_json(d) -> "LinForm":
        from ..formula.serialize import _key_from_json

        return LinForm.make({_key_from_json(k): parse_frac(c) for k, c in d["coeffs"]}, parse_frac(d["const"]))


def as_lin(x) -> LinForm:
    if isinstance(x, LinForm):
        return x
    if isinstance(x, VGTerm):
        return LinForm.from_vg(x)
    if isinstance(x, (int, Fraction)):
        return LinForm.const_(x)
    return LinForm.var(x)


def frac_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    return Fraction(s)


# canonical Presburger literals --------------------------------------------------
#
# ('lt', t)        0 < t
# ('eq', t)        t = 0
# ('dvd', d, t)    d | t
# ('ndvd', d, t)   not d | t
#
# t is a VGTerm without +inf.


def canon_literal(lit) -> Optional[tuple]:
    """Canonical form of a Presburger literal in NNF, or None if it is not one."""
    neg = False
    a = lit
    if isinstance(a, F.Not):
        neg, a = True, a.arg
    if isinstance(a, F.Cmp):
        if a.lhs.inf or a.rhs.inf:
            return None
        t = a.rhs - a.lhs
        if a.op == "<":
            c = ("lt", t)
        elif a.op == "<=":
            c = ("lt", t + 1)
        else:
            c = ("eq", t)
        if neg:
            if c[0] == "lt":
                return ("lt", -c[1] + 1)
            return None
        return c
    if isinstance(a, F.Cong):
        if a.lhs.inf or a.rhs.inf:
            return None
        t = a.lhs - a.rhs
        return ("ndvd" if neg else "dvd", a.d, t)
    return None


def _split_pos_neg(t: VGTerm):
    pos = VGTerm.make({k: c for k, c in t.coeffs if c > 0}, max(t.const, 0))
    negp = VGTerm.make({k: -c for k, c in t.coeffs if c < 0}, max(-t.const, 0))
    return pos, negp


def _ord_sign(t: VGTerm) -> Optional[int]:
    """Sign information for a term made of ord constants and an integer:
    returns +1 if surely > 0, 0 if surely = 0, -1 if surely < 0, 2 if surely >= 0,
    -2 if surely <= 0, None otherwise.  Uses only ord(p) >= 0."""
    if not t.is_constant():
        return None
    cs = [c for _, c in t.coeffs]
    k = t.const
    if not cs:
        return (k > 0) - (k < 0)
    if all(c >= 0 for c in cs):
        return 1 if k > 0 else 2 if k == 0 else None
    if all(c <= 0 for c in cs):
        return -1 if k < 0 else -2 if k == 0 else None
    return None


def _normalize_dvd(d: int, t: VGTerm):
    """Normalize d | t.  Returns (d', t') with d' = 1 meaning 'true' and
    d' = 0 meaning 'false'; single-variable congruences get a unit coefficient."""
    coeffs = {k: c % d for k, c in t.coeffs}
    coeffs = {k: c for k, c in coeffs.items() if c}
    const = t.const % d
    g = d
    for c in coeffs.values():
        g = gcd(g, c)
    if const % g:
        return 0, VGTerm.lit(0)
    d2 = d // g
    coeffs = {k: c // g for k, c in coeffs.items()}
    const //= g
    if d2 == 1:
        return 1, VGTerm.lit(0)
    if len(coeffs) == 1:
        (k, a), = coeffs.items()
        if gcd(a, d2) == 1:
            inv = pow(a, -1, d2)
            return d2, VGTerm.make({k: 1}, (const * inv) % d2)
    # make the leading coefficient canonical under sign change
    return d2, VGTerm.make(coeffs, const)


def _crt(r1: int, d1: int, r2: int, d2: int):
    """Solve x ≡ r1 (d1), x ≡ r2 (d2); None if inconsistent."""
    g = gcd(d1, d2)
    if (r2 - r1) % g:
        return None
    l = d1 // g * d2
    k = ((r2 - r1) // g * pow(d1 // g, -1, d2 // g)) % (d2 // g) if d2 // g > 1 else 0
    return (r1 + d1 * k) % l, l


def merge_congruences(lits: list) -> list:
    """Combine positive congruences with the same variable part (CRT)."""
    groups: dict = {}
    rest = []
    for f in lits:
        if isinstance(f, F.Cong) and f.rhs.is_integer() and f.lhs.const == 0:
            key = f.lhs.coeffs
            r = f.rhs.const % f.d
            if key in groups:
                r0, d0 = groups[key]
                m = _crt(r0, d0, r, f.d)
                if m is None:
                    return [F.FALSE]
                groups[key] = m
            else:
                groups[key] = (r, f.d)
        else:
            rest.append(f)
    out = []
    for key, (r, d) in groups.items():
        out.append(F.Cong(d, VGTerm(key, 0, False), VGTerm.lit(r)))
    # drop negated congruences already decided by a positive one on the same body
    final = []
    for f in rest:
        if isinstance(f, F.Not) and isinstance(f.arg, F.Cong) and f.arg.rhs.is_integer() and f.arg.lhs.const == 0:
            key = f.arg.lhs.coeffs
            if key in groups:
                r, d = groups[key]
                if d % f.arg.d == 0:
                    if r % f.arg.d == f.arg.rhs.const % f.arg.d:
                        return [F.FALSE]
                    continue
        final.append(f)
    return out + final


def literal_to_formula(lit: tuple) -> F.Formula:
    """Convert a canonical literal back to a simplified formula."""
    kind = lit[0]
    if kind in ("lt", "eq"):
        t = lit[1]
        s = _ord_sign(t)
        if kind == "lt":
            if s in (1,):
                return F.TRUE
            if s in (0, -1, -2):
                return F.FALSE
        else:
            if s == 0:
                return F.TRUE
            if s in (1, -1):
                return F.FALSE
        g = 0
        for _, c in t.coeffs:
            g = gcd(g, c)
        if g > 1:
            if kind == "eq":
                if t.const % g:
                    return F.FALSE
                t = VGTerm.make({k: c // g for k, c in t.coeffs}, t.const // g)
            else:
                # 0 < g*u + k  <=>  u >= floor(-k/g) + 1  <=>  0 < u - floor(-k/g)
                k = t.const
                t = VGTerm.make({k2: c // g for k2, c in t.coeffs}, -((-k) // g))
        pos, negp = _split_pos_neg(t)
        if kind == "eq":
            if not pos.coeffs and negp.coeffs:
                pos, negp = negp, pos
            return F.Cmp("=", negp, pos) if pos.coeffs or negp.coeffs else (F.TRUE if t.const == 0 else F.FALSE)
        # 0 < pos - negp  <=>  negp < pos ; prefer <= when it removes a constant
        if pos.const >= 1:
            return F.Cmp("<=", negp, pos - 1)
        return F.Cmp("<", negp, pos)
    d, t = lit[1], lit[2]
    d2, t2 = _normalize_dvd(d, t)
    if d2 == 1:
        val = True
    elif d2 == 0:
        val = False
    elif not t2.coeffs:
        val = t2.const == 0
    else:
        val = None
    if val is not None:
        return F.Const(val if kind == "dvd" else not val)
    body = VGTerm.make(dict(t2.coeffs), 0)
    rhs = (-t2.const) % d2
    atom = F.Cong(d2, body, VGTerm.lit(rhs))
    return atom if kind == "dvd" else F.Not(atom)


def simplify_literal(f: F.Formula) -> F.Formula:
    c = canon_literal(f)
    if c is None:
        return f
    return literal_to_formula(c)


def simplify(f: F.Formula) -> F.Formula:
    """Constant-fold Presburger literals and flatten connectives."""
    from ..formula.transform import nnf

    def go(g):
        if isinstance(g, F.Const):
            return g
        if F.is_atom(g) or (isinstance(g, F.Not) and F.is_atom(g.arg)):
            return simplify_literal(g)
        if isinstance(g, F.And):
            parts = F.conj(*(go(a) for a in g.args))
            if isinstance(parts, F.And):
                return F.conj(*merge_congruences(list(parts.args)))
            return parts
        if isinstance(g, F.Or):
            return F.disj(*(go(a) for a in g.args))
        if isinstance(g, F.Exists):
            return F.Exists(g.var, go(g.body))
        if isinstance(g, F.Forall):
            return F.Forall(g.var, go(g.body))
        return g

    return go(nnf(f))


def is_presburger(f) -> bool:
    from ..formula.transform import atoms

    return all(isinstance(a, (F.Cmp, F.Cong)) for a in atoms(f))


def require_presburger(f):
    from ..formula.transform import atoms, quantifiers

    for a in atoms(f):
        if not isinstance(a, (F.Cmp, F.Cong)):
            raise NotPresburger(f"residue-ring atom {a} in a Presburger formula")
    for v in quantifiers(f):
        if not v.sort.is_vg:
            raise NotPresburger(f"quantifier over {v.sort} in a Presburger formula")
