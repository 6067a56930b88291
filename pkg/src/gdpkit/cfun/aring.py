"""The coefficient ring A: Laurent polynomials in q with factors 1/(1 − q^(−i)).

Exponents may be rational (with a common denominator tracked by the
caller); coefficients are Fractions.  Evaluation at a rational q0 > 1 is
exact whenever every exponent is integral or q0 is a perfect power of the
right order; otherwise a sympy number is returned.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import sympy

Number = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, str):
        if "/" in x:
            a, b = x.split("/")
            return Fraction(int(a), int(b))
        return Fraction(int(x))
    return Fraction(x)


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def qpow(q0, e: Fraction):
    """q0^e exactly: a Fraction when possible, else a sympy number."""
    q0, e = Fraction(q0), Fraction(e)
    if e.denominator == 1:
        return q0 ** int(e)
    root = sympy.Rational(q0.numerator, q0.denominator) ** sympy.Rational(e.numerator, e.denominator)
    if root.is_Rational:
        return Fraction(int(root.p), int(root.q))
    return root


def _add_dicts(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
        if out[k] == 0:
            del out[k]
    return out


def lp_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            k = e1 + e2
            out[k] = out.get(k, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def lp_div_binomial(n: dict, i: Fraction):
    """n / (1 − q^(−i)) as a Laurent polynomial, or None if not exact."""
    rem = dict(n)
    quot: dict = {}
    if not rem:
        return {}
    lo = min(rem)
    while rem:
        top = max(rem)
        if top < lo + i:  # quotient exponents lie in [lo + i, hi]
            return None
        c = rem[top]
        quot[top] = quot.get(top, 0) + c
        rem = _add_dicts(rem, {top: c, top - i: -c}, -1)
    return quot


@dataclass(frozen=True)
class ATerm:
    """num(q) / Π_i (1 − q^(−i)) with num a Laurent polynomial."""

    num: tuple = ()  # sorted ((exponent, coeff), ...)
    den: tuple = ()  # sorted positive indices with multiplicity

    @staticmethod
    def make(num: dict, den=()) -> "ATerm":
        items = tuple(sorted((Fraction(e), Fraction(c)) for e, c in num.items() if c))
        return ATerm(items, tuple(sorted(Fraction(i) for i in den)))

    @staticmethod
    def const(c: Number) -> "ATerm":
        return ATerm.make({0: c})

    @staticmethod
    def qpower(e: Number, c: Number = 1) -> "ATerm":
        return ATerm.make({e: c})

    @staticmethod
    def geometric(i: Number) -> "ATerm":
        """1 / (1 − q^(−i))."""
        return ATerm.make({0: 1}, (i,))

    # ring operations -----------------------------------------------------
    @property
    def num_dict(self) -> dict:
        return dict(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other) -> "ATerm":
        other = as_aterm(other)
        ca, cb = Counter(self.den), Counter(other.den)
        common = ca | cb
        na = self.num_dict
        for i, k in (common - ca).items():
            for _ in range(k):
                na = lp_mul(na, {Fraction(0): 1, -i: -1})
        nb = other.num_dict
        for i, k in (common - cb).items():
            for _ in range(k):
                nb = lp_mul(nb, {Fraction(0): 1, -i: -1})
        return ATerm.make(_add_dicts(na, nb), common.elements()).normalize()

    __radd__ = __add__

    def __neg__(self) -> "ATerm":
        return ATerm(tuple((e, -c) for e, c in self.num), self.den)

    def __sub__(self, other) -> "ATerm":
        return self + (-as_aterm(other))

    def __rsub__(self, other) -> "ATerm":
        return as_aterm(other) + (-self)

    def __mul__(self, other) -> "ATerm":
        other = as_aterm(other)
        return ATerm.make(lp_mul(self.num_dict, other.num_dict), self.den + other.den).normalize()

    __rmul__ = __mul__

    def normalize(self) -> "ATerm":
        """Cancel denominator factors that divide the numerator."""
        if not self.num:
            return ATerm((), ())
        num = self.num_dict
        keep = []
        for i in self.den:
            q = lp_div_binomial(num, i)
            if q is None:
                keep.append(i)
            else:
                num = q
        return ATerm(tuple(sorted((e, c) for e, c in num.items() if c)), tuple(sorted(keep)))

    def exponent_denominator(self) -> int:
        from math import lcm

        e = 1
        for x, _ in self.num:
            e = lcm(e, x.denominator)
        for i in self.den:
            e = lcm(e, i.denominator)
        return e

    # evaluation ---------------------------------------------------------------
    def eval(self, q0):
        total = 0
        for e, c in self.num:
            total = total + c * qpow(q0, e)
        for i in self.den:
            total = total / (1 - qpow(q0, -i))
        return total

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ATerm.const(other)
        if not isinstance(other, ATerm):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.eval(101)) if self.exponent_denominator() == 1 else 0

    # io -----------------------------------------------------------------------
    def to_json(self):
        return {"num": [[frac_str(e), frac_str(c)] for e, c in self.num], "den": [frac_str(i) for i in self.den]}

    @staticmethod
    def from_json(d) -> "ATerm":
        return ATerm.make({_frac(e): _frac(c) for e, c in d["num"]}, [_frac(i) for i in d.get("den", [])])

    def __str__(self) -> str:
        parts = []
        for e, c in sorted(self.num, key=lambda ec: -ec[0]):
            if e == 0:
                parts.append(frac_str(c))
            else:
                qs = f"q^{frac_str(e)}" if e != 1 else "q"
                if "/" in qs or e < 0:
                    qs = f"q^({frac_str(e)})"
                parts.append(qs if c == 1 else f"-{qs}" if c == -1 else f"{frac_str(c)}*{qs}")
        s = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        if not self.den:
            return s
        dens = "*".join(f"(1 - q^(-{frac_str(i)}))" for i in self.den)
        return f"({s})/({dens})"


def as_aterm(x) -> ATerm:
    if isinstance(x, ATerm):
        return x
    if isinstance(x, (int, Fraction)):
        return ATerm.const(x)
    raise TypeError(f"not a ring element: {x!r}")
