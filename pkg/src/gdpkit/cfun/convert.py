"""From closed C-class functions in s to rational functions of t = q^(−s)."""
from __future__ import annotations

from fractions import Fraction
from typing import Optional

from ..errors import ModelRequired, UnboundParameter
from ..formula import formulas as F
from ..formula.terms import OrdConst
from ..presburger.linear import LinForm
from .cterm import CountFactor, CTerm, _count, _Model, as_cfun
from .zeta import ZetaRational


def _split_ord(L: LinForm, p: Optional[int]):
    """(integer constant, c) with L = const + ord c; ord(ℓ) is fixed when p is given."""
    const, c = L.const, Fraction(1)
    for k, v in L.coeffs:
        if not isinstance(k, OrdConst):
            raise UnboundParameter(f"{k} is free; substitute a point first")
        if p is not None:
            const += v if k.prime == p else 0
        else:
            if v.denominator != 1:
                raise ValueError(f"fractional multiple of {k}")
            c *= Fraction(k.prime) ** int(v)
    if const.denominator != 1:
        raise ValueError(f"t-power {L} is not an integer")
    return int(const), c


def _term_zeta(term: CTerm, p: Optional[int], q0: Optional[Fraction], preds) -> ZetaRational:
    if term.chars:
        raise ModelRequired("character factors have no rational form in t")
    m = None
    if term.counts:
        if p is None:
            raise ModelRequired("count factors need a prime")
        m = _Model(p, q0, None, None, preds)
    coeff = Fraction(1)
    for cf in term.counts:
        coeff *= _count(cf, {}, m, preds)
        if coeff == 0:
            return ZetaRational.make({}, q0=q0)
    for L in term.alphas:
        a, c = _split_ord(L, p)
        if c != 1:
            raise ModelRequired(f"polynomial factor {L} needs a prime")
        coeff *= a
    qb, cb = _split_ord(term.beta, p) if term.beta.coeffs else (term.beta.const, Fraction(1))
    if cb != 1:
        raise ModelRequired(f"q-power {term.beta} needs a prime")
    b, c = _split_ord(term.sigma, p)
    if term.coeff.den and q0 is None:
        raise ModelRequired("coefficients with 1/(1 − q^(−i)) need a fixed q")
    if q0 is not None:
        num = {(Fraction(0), 0): coeff * term.coeff.eval(q0)}
    else:
        num = {(e, 0): coeff * v for e, v in term.coeff.num}
    z = ZetaRational.make(num, b, c, [(a, bb) for a, bb in term.sden], q0=q0)
    return z * ZetaRational.make({(Fraction(qb), 0): 1}, q0=q0)


def cfun_to_zeta(f, p: Optional[int] = None, q0=None, preds=None) -> ZetaRational:
    """The closed function f(s) as a ZetaRational.

    f must have no free variables.  With p given, q = p unless q0 says
    otherwise, ord constants are evaluated and count factors are counted in
    Q_p; without p, ord constants of the t-power become the c of the result.
    """
    f = as_cfun(f).absorb_domain()
    if f.free():
        raise UnboundParameter(f"free variables {sorted(v.name for v in f.free())}")
    q0 = Fraction(q0) if q0 is not None else (Fraction(p) if p is not None else None)
    total: Optional[ZetaRational] = None
    for term in f.terms:
        z = _term_zeta(term, p, q0, preds)
        if z.is_zero():
            continue
        if total is not None and total.c != z.c:
            raise ModelRequired("terms with different ord constants in the t-power need a prime")
        total = z if total is None else total + z
    return (total or ZetaRational.make({}, q0=q0)).normalize()
