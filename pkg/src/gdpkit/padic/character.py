"""Additive characters of Q_p with exact cyclotomic values."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from ..formula.arith import vp
from .cyclotomic import Cyclo


def frac_p(x: Fraction, p: int) -> Fraction:
    """p-adic fractional part: the unique c/p^j in [0, 1) with x − c/p^j ∈ Z_p."""
    x = Fraction(x)
    j = vp(x.denominator, p)
    if j == 0:
        return Fraction(0)
    pj = p**j
    unit_den = x.denominator // pj
    c = x.numerator * pow(unit_den, -1, pj) % pj
    return Fraction(c, pj)


@dataclass(frozen=True)
class Character:
    """ψ(x) = exp(2πi · frac_p(x / p^shift)).

    shift = 1 gives a character trivial on pZ_p and non-trivial on Z_p (the
    class used for exponential sums here); shift = 0 is the character
    trivial exactly on Z_p.
    """

    p: int
    shift: int = 1

    def __call__(self, x) -> Cyclo:
        f = frac_p(Fraction(x) / Fraction(self.p) ** self.shift, self.p)
        if f == 0:
            return Cyclo.rational(1)
        return Cyclo.root(f.denominator, f.numerator)

    def conductor_exponent(self) -> int:
        """Smallest e with ψ trivial on p^e Z_p."""
        return self.shift


def char_sum(
    h: Callable,
    domain: Iterable,
    psi: Character,
    e: Optional[Callable] = None,
    N: Optional[int] = None,
) -> Cyclo:
    """Σ_{x ∈ domain} ψ(h(x) + e(x)/N), exactly.

    e(x) is an element of RF_N given by any integer lift; the value does not
    depend on the lift when ψ is trivial on pZ_p.
    """
    total = Cyclo.rational(0)
    for x in domain:
        arg = Fraction(h(x))
        if e is not None:
            arg += Fraction(int(e(x)), N)
        total = total + psi(arg)
    return total


def residue_domain(p: int, k: int, d: int = 1):
    """All x in (Z/p^k)^d (as tuples when d > 1)."""
    r = range(p**k)
    return r if d == 1 else itertools.product(r, repeat=d)


def gauss_sum(p: int, psi: Optional[Character] = None) -> Cyclo:
    """Σ_{x mod p} ψ(x²) with ψ ∈ D_K (equivalently Σ ψ0(x²/p))."""
    psi = psi or Character(p)
    return char_sum(lambda x: x * x, range(p), psi)
