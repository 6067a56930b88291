"""Closed forms for Σ_{n ≥ a} P(n) T^n with finite differences.

    Σ_{n≥a} P(n) T^n = Σ_{i=0}^{d} Δ^i P(a) · T^(a+i) / (1 − T)^(i+1)

with (ΔP)(n) = P(n+1) − P(n).  Coefficients of P may lie in any ring that
supports +, − and multiplication by integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

import sympy


def poly_eval(P: Sequence, n):
    """Σ_k P[k] n^k (Horner)."""
    acc = 0
    for c in reversed(P):
        acc = acc * n + c
    return acc


def forward_difference(P: Sequence, a, i: int):
    """Δ^i P(a) = Σ_k (−1)^(i−k) C(i,k) P(a+k)."""
    total = 0
    for k in range(i + 1):
        total = total + (-1) ** (i - k) * comb(i, k) * poly_eval(P, a + k)
    return total


@lru_cache(maxsize=None)
def stirling2(d: int, i: int) -> int:
    if d == i:
        return 1
    if i == 0 or i > d:
        return 0
    return i * stirling2(d - 1, i) + stirling2(d - 1, i - 1)


def delta_monomial_at_zero(d: int, i: int) -> int:
    """Δ^i (n ↦ n^d) at n = 0, which is i!·S(d, i)."""
    return factorial(i) * stirling2(d, i)


@dataclass(frozen=True)
class TrlForm:
    """Σ_i coeffs[i] · T^(a+i) / (1 − T)^(i+1)."""

    a: int
    coeffs: tuple

    def series(self, n_max: int) -> dict:
        """Coefficients of T^n for min(a, 0) ≤ n ≤ n_max, by expanding each
        1/(1 − T)^(i+1) as a power series."""
        out = {n: 0 for n in range(min(self.a, 0), n_max + 1)}
        length = n_max - self.a + 1
        if length <= 0:
            return out
        base = [1] * length  # 1/(1 − T)
        for i, c in enumerate(self.coeffs):
            s = base
            for _ in range(i):
                acc, run = [], 0
                for x in s:
                    run += x
                    acc.append(run)
                s = acc
            for k, x in enumerate(s):
                n = self.a + i + k
                if n <= n_max:
                    out[n] = out[n] + c * x
        return out

    def to_sympy(self, T=None):
        T = T or sympy.Symbol("T")
        return sum(
            (sympy.nsimplify(c) * T ** (self.a + i) / (1 - T) ** (i + 1) for i, c in enumerate(self.coeffs)),
            sympy.Integer(0),
        )

    def __str__(self) -> str:
        return str(sympy.factor(sympy.together(self.to_sympy())))


def sum_lemma_trl(P: Sequence, a: int) -> TrlForm:
    """Closed form of Σ_{n≥a} P(n) T^n, P given by its coefficient list."""
    P = list(P)
    while len(P) > 1 and P[-1] == 0:
        P.pop()
    d = len(P) - 1
    return TrlForm(a, tuple(forward_difference(P, a, i) for i in range(d + 1)))
