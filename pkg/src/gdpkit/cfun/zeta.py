"""Rational functions of the shape of Igusa zeta functions.

With t = q^(−s), a ZetaRational stands for

    t^(b + ord c) · N(q, t) / Π_i (1 − q^(a_i + b_i s))
  = t^(b + ord c) · N(q, t) / Π_i (1 − q^(a_i) t^(−b_i))

where N is a Laurent polynomial in q (rational exponents allowed) and t.
Multiplying by q^((b + ord c)s) Π_i (1 − q^(a_i + b_i s)) leaves N, a
polynomial in t; (b, c, pairs) is the denominator certificate.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import sympy

from ..errors import NotClearable
from ..formula.arith import vp
from .aring import _frac, frac_str, lp_mul, qpow

SCHEMA_VERSION = 1


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


def _by_t(num: dict) -> dict:
    out: dict = {}
    for (qe, te), c in num.items():
        out.setdefault(te, {})[qe] = out.setdefault(te, {}).get(qe, 0) + c
    return {te: _clean(d) for te, d in out.items() if _clean(d)}


def _from_t(rows: dict) -> dict:
    return _clean({(qe, te): c for te, row in rows.items() for qe, c in row.items()})


def bivar_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (q1, t1), c1 in a.items():
        for (q2, t2), c2 in b.items():
            k = (q1 + q2, t1 + t2)
            out[k] = out.get(k, 0) + c1 * c2
    return _clean(out)


def _qmono(a: Fraction, q0) -> dict:
    """q^a as a Laurent polynomial in q, or as a number when q = q0 is fixed."""
    if q0 is None:
        return {Fraction(a): Fraction(1)}
    return {Fraction(0): Fraction(qpow(q0, a))}


def _factor(a: Fraction, k: int, q0=None) -> dict:
    """1 − q^a t^k."""
    ((e, c),) = _qmono(a, q0).items()
    return _add({(Fraction(0), 0): Fraction(1)}, {(e, k): -c})


def _add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return _clean(out)


def divide_factor(num: dict, a: Fraction, k: int, q0=None) -> Optional[dict]:
    """num / (1 − q^a t^k) for k > 0 when the division is exact."""
    rows = _by_t(num)
    if not rows:
        return {}
    lo, hi = min(rows), max(rows)
    if hi - lo < k:
        return None
    q: dict = {}
    for j in range(lo, hi - k + 1):
        row = dict(rows.get(j, {}))
        if j - k in q:
            for e, c in lp_mul(q[j - k], _qmono(a, q0)).items():
                row[e] = row.get(e, 0) + c
        row = _clean(row)
        if row:
            q[j] = row
    quot = _from_t(q)
    if bivar_mul(quot, _factor(a, k, q0)) != _clean(num):
        return None
    return quot


@dataclass(frozen=True)
class ZetaRational:
    num: tuple  # sorted (((q_exp, t_exp), coeff), ...)
    b: int = 0
    c: Fraction = Fraction(1)
    pairs: tuple = ()  # sorted ((a_i, b_i), ...)
    q0: Optional[Fraction] = None  # fixed value of q, or None for symbolic q

    @staticmethod
    def make(num: dict, b: int = 0, c=1, pairs=(), q0=None) -> "ZetaRational":
        q0 = None if q0 is None else Fraction(q0)
        acc: dict = {}
        for (qe, te), v in num.items():
            if q0 is not None:
                v, qe = Fraction(v) * Fraction(qpow(q0, qe)), 0
            key = (Fraction(qe), int(te))
            acc[key] = acc.get(key, 0) + Fraction(v)
        items = tuple(sorted((k, v) for k, v in acc.items() if v))
        c = Fraction(c)
        if c == 0:
            raise ValueError("c must be nonzero")
        return ZetaRational(items, int(b), c, tuple(sorted((Fraction(x), int(y)) for x, y in pairs)), q0)

    @staticmethod
    def one() -> "ZetaRational":
        return ZetaRational.make({(0, 0): 1})

    @staticmethod
    def monomial(q_exp=0, t_exp=0, coeff=1) -> "ZetaRational":
        return ZetaRational.make({(q_exp, t_exp): coeff}).normalize()

    @property
    def num_dict(self) -> dict:
        return dict(self.num)

    def is_zero(self) -> bool:
        return not self.num

    # normal form ----------------------------------------------------------------
    def normalize(self) -> "ZetaRational":
        num = self.num_dict
        if not num:
            return ZetaRational((), 0, Fraction(1), (), self.q0)
        b = self.b
        pairs = []
        for a, bi in self.pairs:
            if bi == 0:
                raise ValueError("denominator pairs need b_i ≠ 0")
            if bi > 0:  # 1/(1 − X) = −X^(−1)/(1 − X^(−1)), X = q^a t^(−b_i)
                ((e, cf),) = _qmono(-a, self.q0).items()
                num = bivar_mul(num, {(e, bi): -cf})
                a, bi = -a, -bi
            pairs.append((a, bi))
        keep = []
        for a, bi in sorted(pairs):
            q = divide_factor(num, a, -bi, self.q0)
            if q is None:
                keep.append((a, bi))
            else:
                num = q
        m = min(te for (_, te) in num)
        if m:
            num = {(qe, te - m): v for (qe, te), v in num.items()}
            b += m
        return ZetaRational.make(num, b, self.c, keep, self.q0)

    # arithmetic --------------------------------------------------------------------
    def _common(self, other: "ZetaRational"):
        ca, cb = Counter(self.pairs), Counter(other.pairs)
        common = ca | cb
        na, nb = self.num_dict, other.num_dict
        for (a, bi), k in (common - ca).items():
            for _ in range(k):
                na = bivar_mul(na, _factor(a, -bi, self.q0))
        for (a, bi), k in (common - cb).items():
            for _ in range(k):
                nb = bivar_mul(nb, _factor(a, -bi, self.q0))
        return na, nb, list(common.elements())

    def __add__(self, other) -> "ZetaRational":
        other = as_zeta(other, self.q0)
        if self.is_zero():
            return other.normalize()
        if other.is_zero():
            return self.normalize()
        x, y = self.normalize(), other.normalize()
        _same_q(x, y)
        if x.c != y.c:
            raise NotClearable("sum of zeta functions with different ord(c) shifts is not supported")
        na, nb, pairs = x._common(y)
        b = min(x.b, y.b)
        na = {(qe, te + x.b - b): v for (qe, te), v in na.items()}
        nb = {(qe, te + y.b - b): v for (qe, te), v in nb.items()}
        tot = dict(na)
        for k, v in nb.items():
            tot[k] = tot.get(k, 0) + v
        return ZetaRational.make(_clean(tot), b, x.c, pairs, x.q0).normalize()

    __radd__ = __add__

    def __neg__(self) -> "ZetaRational":
        return ZetaRational(tuple((k, -v) for k, v in self.num), self.b, self.c, self.pairs, self.q0)

    def __sub__(self, other) -> "ZetaRational":
        return self + (-as_zeta(other, self.q0))

    def __mul__(self, other) -> "ZetaRational":
        other = as_zeta(other, self.q0)
        q0 = _same_q(self, other)
        return ZetaRational.make(
            bivar_mul(self.num_dict, other.num_dict), self.b + other.b, self.c * other.c, self.pairs + other.pairs, q0
        ).normalize()

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ZetaRational):
            return NotImplemented
        x, y = self.normalize(), other.normalize()
        if x.c != y.c or x.q0 != y.q0:
            return False
        try:
            return (x - y).is_zero()
        except NotClearable:
            return False

    def __hash__(self):
        n = self.normalize()
        return hash((n.b, n.c, n.pairs, n.q0))

    # evaluation -------------------------------------------------------------------------
    def ord_c(self, p: Optional[int]) -> int:
        if self.c == 1:
            return 0
        if p is None:
            raise ValueError("ord(c) needs a prime")
        return vp(self.c.numerator, p) - vp(self.c.denominator, p)

    def eval(self, q0, t0, p: Optional[int] = None):
        """Value at q = q0, t = q^(−s) = t0 (p fixes ord c; default p = q0)."""
        if self.q0 is not None:
            if q0 is not None and Fraction(q0) != self.q0:
                raise ValueError(f"this zeta function has q fixed to {self.q0}")
            q0 = self.q0
        p = p if p is not None else (int(q0) if Fraction(q0).denominator == 1 else None)
        t0 = Fraction(t0)
        val = 0
        for (qe, te), c in self.num:
            val = val + c * qpow(q0, qe) * t0**te
        val = val * t0 ** (self.b + self.ord_c(p))
        for a, bi in self.pairs:
            val = val / (1 - qpow(q0, a) * t0 ** (-bi))
        return val

    def series(self, q0, n_terms: int, p: Optional[int] = None) -> list:
        """Coefficients of t^0..t^(n−1) at q = q0 (exact Fractions)."""
        q0 = self.q0 if self.q0 is not None else q0
        p = p if p is not None else int(q0)
        shift = self.b + self.ord_c(p)
        coeffs = [Fraction(0)] * n_terms
        for (qe, te), c in self.num:
            k = te + shift
            if k < 0:
                raise NotClearable("negative power of t")
            if k < n_terms:
                coeffs[k] += c * Fraction(qpow(q0, qe))
        for a, bi in self.pairs:
            if bi >= 0:
                raise NotClearable("series expansion needs normalized pairs")
            r, k = Fraction(qpow(q0, a)), -bi
            for n in range(k, n_terms):
                coeffs[n] += r * coeffs[n - k]
        return coeffs

    # io -------------------------------------------------------------------------------------
    def to_sympy(self, q=None, t=None, u=None):
        q = q or sympy.Symbol("q", positive=True)
        if self.q0 is not None:
            q = sympy.Rational(self.q0.numerator, self.q0.denominator)
        t = t or sympy.Symbol("t")
        u = u if u is not None else (sympy.Integer(1) if self.c == 1 else sympy.Symbol("t_ordc"))
        n = sum((sympy.Rational(c.numerator, c.denominator) * q ** sympy.Rational(qe.numerator, qe.denominator) * t**te
                 for (qe, te), c in self.num), sympy.Integer(0))
        d = sympy.Integer(1)
        for a, bi in self.pairs:
            d *= 1 - q ** sympy.Rational(a.numerator, a.denominator) * t ** (-bi)
        return t**self.b * u * n / d

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "b": self.b,
            "c": frac_str(self.c),
            "numerator": [[frac_str(qe), te, frac_str(c)] for (qe, te), c in self.num],
            "denominator": [[frac_str(a), bi] for a, bi in self.pairs],
            "q": None if self.q0 is None else frac_str(self.q0),
        }

    @staticmethod
    def from_json(d) -> "ZetaRational":
        return ZetaRational.make(
            {(_frac(qe), int(te)): _frac(c) for qe, te, c in d["numerator"]},
            int(d.get("b", 0)),
            _frac(d.get("c", "1")),
            [(_frac(a), int(bi)) for a, bi in d.get("denominator", [])],
            None if d.get("q") is None else _frac(d["q"]),
        )

    def __str__(self) -> str:
        q, t = sympy.Symbol("q", positive=True), sympy.Symbol("t")
        if self.q0 is not None:
            q = sympy.Rational(self.q0.numerator, self.q0.denominator)
        n = sum((sympy.Rational(c.numerator, c.denominator) * q ** sympy.Rational(qe.numerator, qe.denominator) * t**te
                 for (qe, te), c in self.num), sympy.Integer(0))
        parts = [f"({sympy.sstr(sympy.expand(n))})"]
        shift = self.b
        if shift:
            parts.insert(0, f"t^{shift}")
        if self.c != 1:
            parts.insert(0, f"t^ord({frac_str(self.c)})")
        s = "*".join(parts)
        if self.pairs:
            s += " / " + "".join(f"(1 - q^({frac_str(a)})*t^{-bi})" for a, bi in self.pairs)
        if self.q0 is not None:
            s += f"  [q = {frac_str(self.q0)}]"
        return s


def _same_q(x: ZetaRational, y: ZetaRational):
    if x.q0 != y.q0:
        raise ValueError("zeta functions with different fixed q")
    return x.q0


def as_zeta(x, q0=None) -> ZetaRational:
    if isinstance(x, ZetaRational):
        return x
    if isinstance(x, (int, Fraction)):
        return ZetaRational.make({(0, 0): x}, q0=q0)
    raise TypeError(f"not a zeta function: {x!r}")


def zeta_normalize(z: ZetaRational) -> ZetaRational:
    return z.normalize()


def _cleared(z: ZetaRational, pairs):
    q, t, u = sympy.Symbol("q", positive=True), sympy.Symbol("t"), sympy.Symbol("t_ordc")
    if z.q0 is not None:
        q = sympy.Rational(z.q0.numerator, z.q0.denominator)
    expr = z.to_sympy(q, t, u if z.c != 1 else sympy.Integer(1))
    clear = t ** (-z.b) * (u ** (-1) if z.c != 1 else 1)
    for a, bi in pairs:
        a = Fraction(a)
        clear *= 1 - q ** sympy.Rational(a.numerator, a.denominator) * t ** (-int(bi))
    cleared = sympy.cancel(sympy.together(expr * clear))
    num, den = sympy.fraction(cleared)
    if den.has(t) or den.has(u) or not num.is_polynomial(t):
        raise NotClearable(f"{z} does not clear to a polynomial in t")
    try:
        poly = sympy.Poly(sympy.expand(num / den), t)
    except sympy.PolynomialError as e:
        raise NotClearable(str(e)) from None
    if any(m[0] < 0 for m in poly.monoms()):
        raise NotClearable("negative powers of t remain")
    return poly


def denominator_certificate(z: ZetaRational) -> tuple:
    """(b, c, pairs) such that z · q^((b + ord c)s) · Π(1 − q^(a_i + b_i s)) is
    a polynomial in t = q^(−s); checked with sympy."""
    z = z.normalize()
    _cleared(z, z.pairs)
    return z.b, z.c, [(a, bi) for a, bi in z.pairs]


def clears_with(z: ZetaRational, pairs) -> bool:
    """Whether z · q^((b + ord c)s) · Π_{pairs}(1 − q^(a + b s)) is a polynomial in t."""
    try:
        _cleared(z.normalize(), pairs)
    except NotClearable:
        return False
    return True
