"""Brute-force oracles for value-group sums and loci.

partial_sum adds f(x, y) over the 200 integers −99 ≤ y ≤ 100.  tail_bound
majorizes Σ |f| over the rest: each term is at most K·P(|y|)·r^|y| on a side,
with P having the absolute values of the polynomial coefficients, and
Σ_{n ≥ N} P(n) r^n is summed in closed form.  Terms that do not decay on a
side must cancel there; their sum is checked to vanish on a long stretch,
which suffices because it is a quasi-polynomial exponential in y with
small period.
"""
from __future__ import annotations

from fractions import Fraction

import sympy

from gdpkit.cfun.aring import qpow
from gdpkit.cfun.cterm import CFunction, eval_cfun
from gdpkit.cfun.trl import sum_lemma_trl
from gdpkit.formula.arith import vp

LO, HI = -99, 100
STRETCH = 120


def _up(x) -> Fraction:
    """A rational upper bound for a nonnegative real (exact when rational)."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    v = sympy.nsimplify(x)
    if v.is_Rational:
        return Fraction(int(v.p), int(v.q))
    f = float(sympy.N(x, 40))
    return Fraction(f).limit_denominator(10**12) * Fraction(1000001, 1000000)


def partial_sum(f: CFunction, y: str, point: dict, p: int, t=None):
    total = Fraction(0)
    for k in range(LO, HI + 1):
        total = eval_cfun(f, {**point, y: k}, p=p, t=t) + total
    return total


def _abs_poly(alphas, yvar, point, p):
    """Coefficients of a polynomial in n ≥ 0 majorizing |Π α(side·n)|."""
    P = [Fraction(1)]
    for L in alphas:
        c = abs(L.coeff(yvar))
        d = abs(L.evaluate({**point, yvar.name: 0}, lambda q: 1 if q == p else 0))
        new = [Fraction(0)] * (len(P) + 1)
        for i, a in enumerate(P):
            new[i] += a * d
            new[i + 1] += a * c
        P = new
    return P


def _count_bound(term, p) -> int:
    k = 1
    for cf in term.counts:
        for v in cf.vars:
            k *= p ** (vp(v.sort.n, p) + 1)
    return k


def tail_bound(f: CFunction, yvar, point: dict, p: int, t=None) -> Fraction:
    """Upper bound for Σ over y outside [LO, HI] of |f(x, y)|."""
    f = f.absorb_domain()
    bound = Fraction(0)
    ordc = lambda q: 1 if q == p else 0
    for side, start in ((1, HI + 1), (-1, -LO + 1)):
        slow = []
        for term in f.terms:
            b = term.beta.coeff(yvar)
            s = term.sigma.coeff(yvar)
            rate = qpow(p, side * b) * (Fraction(t) ** int(side * s) if s else 1)
            if _up(rate) >= 1:
                slow.append(term)
                continue
            r = _up(rate)
            K = _up(abs(term.coeff.eval(p))) * _count_bound(term, p)
            base = term.beta.evaluate({**point, yvar.name: 0}, ordc)
            K *= _up(qpow(p, base))
            if term.has_s():
                sg = term.sigma.evaluate({**point, yvar.name: 0}, ordc)
                K *= Fraction(t) ** int(sg)
                for a, bb in term.sden:
                    K *= _up(abs(1 / (1 - qpow(p, a) * Fraction(t) ** int(-bb))))
            P = _abs_poly(term.alphas, yvar, point, p)
            form = sum_lemma_trl(P, start)
            tail = sum(c * r ** (form.a + i) / (1 - r) ** (i + 1) for i, c in enumerate(form.coeffs))
            bound += K * tail
        if slow:
            g = CFunction.make(slow)
            for n in range(start, start + STRETCH):
                v = eval_cfun(g, {**point, yvar.name: side * n}, p=p, t=t)
                if v != 0:
                    raise ArithmeticError(f"non-decaying part does not vanish at y = {side * n}")
    return bound


def _mag(v) -> float:
    if isinstance(v, Fraction):
        return abs(float(v))
    if hasattr(v, "to_complex"):
        return abs(v.to_complex())
    return abs(complex(v))


def classify(f: CFunction, y: str, point: dict, p: int):
    """(integrable, bounded) for y ↦ f(point, y), from far-window magnitudes.

    The far window steps by 7 so that every residue class of a small period
    is visited.
    """
    def mag(n):
        return max(_mag(eval_cfun(f, {**point, y: s * n}, p=p)) for s in (1, -1))

    near = {n: mag(n) for n in range(100, 200)}
    integrable = max(near[n] for n in range(100, 140)) < 2.0**-40
    far = max(mag(n) for n in range(200, 400, 7))
    bounded = far <= max(near.values()) * (1 + 1e-9) + 1e-300
    return integrable, bounded
