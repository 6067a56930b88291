"""Exact arithmetic in cyclotomic fields Q(ζ_N) with rational coefficients."""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Union


@lru_cache(maxsize=None)
def cyclotomic_poly(N: int) -> tuple:
    """Coefficients of Φ_N, lowest degree first (integers)."""
    num = [-1] + [0] * (N - 1) + [1]  # x^N - 1
    for d in range(1, N):
        if N % d == 0:
            num = _divide_exact(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _divide_exact(a: list, b: list) -> list:
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        q = a[i + len(b) - 1] // b[-1]
        out[i] = q
        for j, c in enumerate(b):
            a[i + j] -= q * c
    if any(a[: len(b) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


def _reduce(coeffs: dict, N: int) -> tuple:
    """Reduce Σ c_j ζ^j (j mod N) to the power basis of degree < φ(N)."""
    phi = cyclotomic_poly(N)
    deg = len(phi) - 1
    v = [Fraction(0)] * N
    for j, c in coeffs.items():
        v[j % N] += c
    # long division by the monic Φ_N
    for i in range(N - 1, deg - 1, -1):
        c = v[i]
        if c:
            shift = i - deg
            for j, pc in enumerate(phi):
                v[shift + j] -= c * pc
    return tuple(v[:deg])


class Cyclo:
    """An element of Q(ζ_N), ζ_N = exp(2πi/N), in the power basis."""

    __slots__ = ("N", "c")

    def __init__(self, N: int, coeffs: Union[dict, tuple, None] = None):
        self.N = N
        if coeffs is None:
            coeffs = {}
        if isinstance(coeffs, tuple):
            self.c = coeffs
        else:
            self.c = _reduce({j: Fraction(v) for j, v in coeffs.items()}, N)

    @staticmethod
    def root(N: int, j: int = 1) -> "Cyclo":
        return Cyclo(N, {j % N: 1})

    @staticmethod
    def rational(x, N: int = 1) -> "Cyclo":
        return Cyclo(N, {0: Fraction(x)})

    def lift(self, M: int) -> "Cyclo":
        """The same number in Q(ζ_M), N | M."""
        if M == self.N:
            return self
        if M % self.N:
            raise ValueError(f"{self.N} does not divide {M}")
        k = M // self.N
        return Cyclo(M, {j * k: c for j, c in enumerate(self.c) if c})

    def _common(self, other):
        if not isinstance(other, Cyclo):
            other = Cyclo.rational(other, self.N)
        M = self.N * other.N // gcd(self.N, other.N)
        return self.lift(M), other.lift(M)

    def __add__(self, other):
        a, b = self._common(other)
        n = max(len(a.c), len(b.c))
        return Cyclo(a.N, tuple((a.c[i] if i < len(a.c) else 0) + (b.c[i] if i < len(b.c) else 0) for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.N, tuple(-x for x in self.c))

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyclo) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Cyclo):
            r = Fraction(other)
            return Cyclo(self.N, tuple(x * r for x in self.c))
        a, b = self._common(other)
        prod: dict = {}
        for i, x in enumerate(a.c):
            if not x:
                continue
            for j, y in enumerate(b.c):
                if y:
                    prod[i + j] = prod.get(i + j, 0) + x * y
        return Cyclo(a.N, prod)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Cyclo):
            if not other.is_rational():
                raise NotImplementedError("division by an irrational cyclotomic number")
            other = other.rational_value()
        return self * (1 / Fraction(other))

    def conj(self) -> "Cyclo":
        return Cyclo(self.N, {(-j) % self.N: c for j, c in enumerate(self.c) if c})

    def abs2(self) -> "Cyclo":
        return self * self.conj()

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0] if self.c else Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, Cyclo):
            try:
                other = Cyclo.rational(Fraction(other), self.N)
            except (TypeError, ValueError):
                return NotImplemented
        a, b = self._common(other)
        n = max(len(a.c), len(b.c))
        pad = lambda t: tuple(t) + (Fraction(0),) * (n - len(t))
        return pad(a.c) == pad(b.c)

    def __hash__(self):
        return hash((self.N, self.c))

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.N)
        return sum(complex(float(c)) * z**j for j, c in enumerate(self.c))

    def to_json(self):
        return {"conductor": self.N, "coeffs": [f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator) for c in self.c]}

    def __repr__(self) -> str:
        terms = [f"{c}*z^{j}" if j else str(c) for j, c in enumerate(self.c) if c]
        return f"Cyclo[{self.N}](" + (" + ".join(terms) or "0") + ")"
