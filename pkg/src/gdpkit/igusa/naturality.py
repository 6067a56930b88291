"""Generators of constructible functions written as integrals, checked in Q_p.

Each generator has an integral form over extra K-variables:

* q^β is the measure of {y : ord y ≥ −β};
* 1/(1 − q^(−i)) is the measure of {ac(y) = 1, ord y ≥ −1, ord y ≡ −1 mod i};
* a value α ≥ 0 is ∫ q^(ord y + 1) over {ac(y) = 1, 0 ≤ ord y < α}, and a
  negative value is the negative of the same integral for −α;
* #Y for Y ⊂ Π RF_(n_t) is q^(Σ 1 + ord n_t) times the measure of the
  z ∈ O^ℓ with (res_(n_t)(z_t)) ∈ Y;
* Σ_(y∈Y) ψ(h(y) + e(y)/N) is the integral of ψ(h(res z) + z'/N) against
  q^(1 + ord N + Σ 1 + ord n_t) over z ∈ O^ℓ, z' ∈ O with res z ∈ Y and
  res_N(z') = e(res z).

The measures are computed by the exact measure routine.  The character
integral is a finite sum over cosets one digit finer than the residue
data, so any dependence of the integrand on the finer digits would show.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from ..formula import formulas as F
from ..formula.arith import vp
from ..formula.parser import parse_formula, parse_term
from ..formula.sorts import RF
from ..formula.terms import Var
from ..formula.transform import substitute_many
from ..padic.character import Character
from ..padic.cyclotomic import Cyclo
from ..padic.element import ResidueRingElem
from ..padic.measure import measure, res_term
from ..padic.structure import eval_formula_model

GROUPS = ("qbeta", "geom", "alpha", "count", "psi")


@dataclass(frozen=True)
class NaturalityRow:
    group: str
    case: str
    direct: str
    integral: str
    ok: bool

    def to_json(self) -> dict:
        return {"group": self.group, "case": self.case, "direct": self.direct, "integral": self.integral, "pass": self.ok}


def _s(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(x) if isinstance(x, Cyclo) else str(x)


def _conj(*texts: str) -> F.Formula:
    return parse_formula(r" /\ ".join(texts))


def check_qbeta(p: int, beta: int) -> NaturalityRow:
    lhs = Fraction(p) ** beta
    rhs = measure(parse_formula(f"ord{{y}} >= {-beta}"), p)
    return NaturalityRow("qbeta", f"beta={beta}", _s(lhs), _s(rhs), lhs == rhs)


def check_geom(p: int, i: int) -> NaturalityRow:
    lhs = 1 / (1 - Fraction(1, p**i))
    parts = ["ac[1]{y} = 1", "ord{y} >= -1"]
    if i > 1:
        parts.append(f"ord{{y}} ≡{{{i}}} -1")
    rhs = measure(_conj(*parts), p)
    return NaturalityRow("geom", f"i={i}", _s(lhs), _s(rhs), lhs == rhs)


def check_alpha(p: int, alpha: int) -> NaturalityRow:
    a = abs(alpha)
    if a == 0:
        rhs = Fraction(0)
    else:
        rhs = measure(_conj("ac[1]{y} = 1", "0 <= ord{y}", f"ord{{y}} < {a}"), p, weight=parse_term("ord{y} + 1"))
    rhs = rhs if alpha >= 0 else -rhs
    return NaturalityRow("alpha", f"alpha={alpha}", _s(Fraction(alpha)), _s(rhs), rhs == alpha)


def _residues(p: int, ns: Sequence[int]):
    return itertools.product(*(range(p ** (vp(n, p) + 1)) for n in ns))


def _in_Y(Y: F.Formula, names: Sequence[str], ns: Sequence[int], values, p: int) -> bool:
    sigma = {x: ResidueRingElem(p, n, v) for x, n, v in zip(names, ns, values)}
    return eval_formula_model(Y, sigma, p)


def count_direct(Y: F.Formula, names: Sequence[str], ns: Sequence[int], p: int) -> int:
    return sum(1 for v in _residues(p, ns) if _in_Y(Y, names, ns, v, p))


def count_integral(Y: F.Formula, names: Sequence[str], ns: Sequence[int], p: int) -> Fraction:
    labels = [f"z{t}" for t in range(len(names))]
    Z = substitute_many(Y, {Var(x, RF(n)): res_term(lab, n) for x, n, lab in zip(names, ns, labels)})
    Z = F.conj(Z, *(parse_formula(f"ord{{{lab}}} >= 0") for lab in labels))
    scale = Fraction(p) ** sum(1 + vp(n, p) for n in ns)
    return scale * measure(Z, p)


def check_count(p: int, text: str, sorts: dict) -> NaturalityRow:
    names = list(sorts)
    ns = [int(sorts[x][3:-1]) for x in names]
    Y = parse_formula(text, sorts)
    lhs = count_direct(Y, names, ns, p)
    rhs = count_integral(Y, names, ns, p)
    return NaturalityRow("count", f"#{{{', '.join(f'{x}:{sorts[x]}' for x in names)} : {text}}}", str(lhs), _s(rhs), rhs == lhs)


def psi_direct(p, Y, names, ns, h, e, N, psi) -> Cyclo:
    total = Cyclo.rational(0)
    kN = p ** (vp(N, p) + 1)
    for v in _residues(p, ns):
        if _in_Y(Y, names, ns, v, p):
            total = total + psi(Fraction(h(*v)) + Fraction(e(*v) % kN, N))
    return total


def psi_integral(p, Y, names, ns, h, e, N, psi) -> Cyclo:
    """The integral form, summed over cosets one p-adic digit finer."""
    ks = [vp(n, p) + 1 for n in ns]
    kN = vp(N, p) + 1
    vol = Fraction(1, p ** (sum(k + 1 for k in ks) + kN + 1))
    scale = Fraction(p) ** (kN + sum(ks))
    total = Cyclo.rational(0)
    for z in itertools.product(*(range(p ** (k + 1)) for k in ks)):
        res = tuple(zt % p**k for zt, k in zip(z, ks))
        if not _in_Y(Y, names, ns, res, p):
            continue
        target = e(*res) % p**kN
        for w in range(p ** (kN + 1)):
            if w % p**kN != target:
                continue
            total = total + psi(Fraction(h(*res)) + Fraction(w, N))
    return total * Cyclo.rational(scale * vol)


@dataclass(frozen=True)
class PsiCase:
    name: str
    text: str
    sorts: dict
    h: Callable
    e: Callable
    N: int


def psi_cases(p: int) -> list:
    return [
        PsiCase("h=x^2, e=x, N=1", "xi = xi", {"xi": "rf[1]"}, lambda x: x * x, lambda x: x, 1),
        PsiCase("h=0, e=x, N=p", "xi*xi = xi", {"xi": f"rf[{p}]"}, lambda x: 0, lambda x: x, p),
        PsiCase("h=x*y, e=y, N=1", "xi = xi", {"xi": "rf[1]", "eta": "rf[1]"}, lambda x, y: x * y, lambda x, y: y, 1),
        PsiCase("h=x^3, e=x+1, N=p", "~ xi = 0", {"xi": f"rf[{p}]"}, lambda x: x**3, lambda x: x + 1, p),
    ]


def check_psi(p: int, case: PsiCase, shift: int = 1) -> NaturalityRow:
    names = list(case.sorts)
    ns = [int(case.sorts[x][3:-1]) for x in names]
    Y = parse_formula(case.text, case.sorts)
    psi = Character(p, shift)
    lhs = psi_direct(p, Y, names, ns, case.h, case.e, case.N, psi)
    rhs = psi_integral(p, Y, names, ns, case.h, case.e, case.N, psi)
    return NaturalityRow("psi", f"{case.name} (shift {shift})", _s(lhs), _s(rhs), lhs == rhs)


def count_cases(p: int) -> list:
    return [
        ("xi*xi = xi", {"xi": "rf[2]"}),
        ("xi*xi = 1", {"xi": "rf[4]"}),
        ("xi*eta = 1", {"xi": "rf[2]", "eta": "rf[2]"}),
        (f"~ xi = 0", {"xi": f"rf[{p}]"}),
    ]


def verify_naturality(prime: int, cases: Optional[Iterable[str]] = None) -> list:
    """Rows of (group, case, direct value, integral value, pass)."""
    if prime not in (2, 3, 5):
        raise ValueError("naturality checks run for p in {2, 3, 5}")
    groups = GROUPS if cases is None or cases == "all" else tuple(cases)
    unknown = set(groups) - set(GROUPS)
    if unknown:
        raise ValueError(f"unknown naturality groups {sorted(unknown)}")
    rows = []
    for g in groups:
        if g == "qbeta":
            rows += [check_qbeta(prime, b) for b in range(-1, 4)]
        elif g == "geom":
            rows += [check_geom(prime, i) for i in (1, 2, 3)]
        elif g == "alpha":
            rows += [check_alpha(prime, a) for a in range(-2, 4)]
        elif g == "count":
            rows += [check_count(prime, text, sorts) for text, sorts in count_cases(prime)]
        else:
            rows += [check_psi(prime, c, s) for c in psi_cases(prime) for s in (1, 0)]
    return rows
