"""C-class functions: finite sums of terms

    a(q) · #Y_x · q^(β(x)) · Π α_j(x) · t^(σ(x)) · Π (1 − q^(a + b s))^(−1) · Π ψ(h + e/N)

with t = q^(−s).  Count factors #Y_x count the residue-ring points of a
formula; a count factor without bound variables is the indicator of its
formula.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from ..errors import ModelRequired, UnboundParameter, UnboundVariable
from ..formula import formulas as F
from ..formula.evaluate import Structure, compile_formula, compile_rf
from ..formula.printer import term_str, to_text
from ..formula.serialize import formula_from_json, formula_to_json, term_from_json, term_to_json
from ..formula.sorts import parse_sort
from ..formula.terms import OrdConst, OrdParam, Var
from ..formula.transform import all_vars, fresh_name, free_vars, ord_primes, substitute
from ..presburger.linear import LinForm, simplify
from .aring import ATerm, _frac, as_aterm, frac_str, qpow

SCHEMA_VERSION = 1


# factors ------------------------------------------------------------------------------------


@dataclass(frozen=True)
class CountFactor:
    """#{ξ : Y(x, ξ)} over the residue-ring variables ξ; an indicator when ξ is empty."""

    formula: F.Formula
    vars: tuple = ()

    def free(self) -> set:
        return free_vars(self.formula) - set(self.vars)

    def is_indicator(self) -> bool:
        return not self.vars

    def to_json(self):
        return {"formula": formula_to_json(self.formula), "vars": [[v.name, str(v.sort)] for v in self.vars]}

    @staticmethod
    def from_json(d) -> "CountFactor":
        return CountFactor(formula_from_json(d["formula"]), tuple(Var(n, parse_sort(s)) for n, s in d.get("vars", [])))

    def __str__(self) -> str:
        if not self.vars:
            return f"[{to_text(self.formula)}]"
        vs = ", ".join(f"{v.name}:{v.sort}" for v in self.vars)
        return f"#{{{vs} : {to_text(self.formula)}}}"


@dataclass(frozen=True)
class CharFactor:
    """ψ(h + e/N): h names a field parameter (a rational in the point), e is a
    residue-ring term of RF_N."""

    h: Optional[str] = None
    e: object = None
    N: int = 1

    def free(self) -> set:
        from ..formula.terms import rf_leaves

        out = set()
        if self.e is not None:
            out |= {x for x in rf_leaves(self.e) if isinstance(x, Var)}
        return out

    def to_json(self):
        return {"h": self.h, "e": None if self.e is None else term_to_json(self.e), "N": self.N}

    @staticmethod
    def from_json(d) -> "CharFactor":
        return CharFactor(d.get("h"), None if d.get("e") is None else term_from_json(d["e"]), int(d.get("N", 1)))

    def __str__(self) -> str:
        h = self.h if self.h is not None else "0"
        e = "0" if self.e is None else term_str(self.e)
        return f"psi({h}, {e}, {self.N})"


def _lin_keys_vars(L: LinForm) -> set:
    return {k for k in L.keys() if isinstance(k, Var)}


def _lin_str(L: LinForm) -> str:
    return str(L)


# terms ------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class CTerm:
    coeff: ATerm = field(default_factory=lambda: ATerm.const(1))
    counts: tuple = ()
    beta: LinForm = LinForm()
    alphas: tuple = ()
    sigma: LinForm = LinForm()
    sden: tuple = ()  # ((a, b), ...): factors 1/(1 − q^(a + b s))
    chars: tuple = ()

    # structure -----------------------------------------------------------------------
    def free(self) -> set:
        out = set()
        for c in self.counts:
            out |= c.free()
        for L in (self.beta, self.sigma, *self.alphas):
            out |= _lin_keys_vars(L)
        for ch in self.chars:
            out |= ch.free()
        return out

    def has_s(self) -> bool:
        return bool(self.sigma.coeffs) or self.sigma.const != 0 or bool(self.sden)

    def has_psi(self) -> bool:
        return bool(self.chars)

    def shape_key(self):
        return (
            self.counts,
            self.beta,
            tuple(sorted(self.alphas, key=str)),
            self.sigma,
            tuple(sorted(self.sden)),
            self.chars,
        )

    def canonical(self) -> "CTerm":
        """Fold constants into the coefficient and sort factor lists."""
        coeff = self.coeff
        alphas = []
        for L in self.alphas:
            if not L.coeffs:
                coeff = coeff * ATerm.const(L.const)
            else:
                alphas.append(L)
        beta = self.beta
        if beta.const:
            coeff = coeff * ATerm.qpower(beta.const)
            beta = LinForm(beta.coeffs, Fraction(0))
        counts = [c for c in self.counts if c.vars]
        ind = simplify(F.conj(*(c.formula for c in self.counts if not c.vars)))
        if ind == F.FALSE:
            coeff = ATerm.const(0)
        elif ind != F.TRUE:
            counts.append(CountFactor(ind))
        if coeff.is_zero():
            return CTerm(ATerm.const(0))
        return CTerm(
            coeff,
            tuple(sorted(counts, key=str)),
            beta,
            tuple(sorted(alphas, key=str)),
            self.sigma,
            tuple(sorted((Fraction(a), Fraction(b)) for a, b in self.sden)),
            tuple(sorted(self.chars, key=str)),
        )

    def is_zero(self) -> bool:
        return self.coeff.is_zero()

    def __mul__(self, other: "CTerm") -> "CTerm":
        counts = list(self.counts)
        taken = {v.name for c in self.counts for v in c.vars} | {v.name for v in self.free() | other.free()}
        for c in other.counts:
            f, vs = c.formula, []
            for v in c.vars:
                if v.name in taken:
                    nv = Var(fresh_name(v.name, taken | {w.name for w in all_vars(f)}), v.sort)
                    f = substitute(f, v, nv)
                    v = nv
                taken.add(v.name)
                vs.append(v)
            counts.append(CountFactor(f, tuple(vs)))
        return CTerm(
            self.coeff * other.coeff,
            tuple(counts),
            self.beta + other.beta,
            self.alphas + other.alphas,
            self.sigma + other.sigma,
            self.sden + other.sden,
            self.chars + other.chars,
        ).canonical()

    def scale(self, a) -> "CTerm":
        return replace(self, coeff=self.coeff * as_aterm(a) if not isinstance(a, ATerm) else self.coeff * a)

    # io ---------------------------------------------------------------------------------
    def to_json(self):
        return {
            "coeff": self.coeff.to_json(),
            "counts": [c.to_json() for c in self.counts],
            "beta": self.beta.to_json(),
            "alphas": [L.to_json() for L in self.alphas],
            "sigma": self.sigma.to_json(),
            "sden": [[frac_str(a), frac_str(b)] for a, b in self.sden],
            "chars": [c.to_json() for c in self.chars],
        }

    @staticmethod
    def from_json(d) -> "CTerm":
        return CTerm(
            ATerm.from_json(d["coeff"]),
            tuple(CountFactor.from_json(c) for c in d.get("counts", [])),
            LinForm.from_json(d["beta"]) if "beta" in d else LinForm(),
            tuple(LinForm.from_json(x) for x in d.get("alphas", [])),
            LinForm.from_json(d["sigma"]) if "sigma" in d else LinForm(),
            tuple((_frac(a), _frac(b)) for a, b in d.get("sden", [])),
            tuple(CharFactor.from_json(c) for c in d.get("chars", [])),
        )

    def __str__(self) -> str:
        parts = []
        c = str(self.coeff)
        if c != "1" or not (self.counts or self.beta.coeffs or self.alphas or self.has_s() or self.chars):
            parts.append(c if " " not in c or c.startswith("(") else f"({c})")
        if self.beta.coeffs or self.beta.const:
            parts.append(f"q^({_lin_str(self.beta)})")
        if self.sigma.coeffs or self.sigma.const:
            parts.append(f"t^({_lin_str(self.sigma)})")
        parts.extend(f"({_lin_str(L)})" for L in self.alphas)
        parts.extend(str(cf) for cf in self.counts)
        parts.extend(f"sden({frac_str(a)}, {frac_str(b)})" for a, b in self.sden)
        parts.extend(str(ch) for ch in self.chars)
        return " * ".join(parts)


def _collect(terms) -> tuple:
    """Merge terms of equal shape and drop zeros; deterministic order."""
    acc: dict = {}
    order = []
    for t in terms:
        t = t.canonical()
        if t.is_zero():
            continue
        k = t.shape_key()
        if k in acc:
            acc[k] = replace(acc[k], coeff=acc[k].coeff + t.coeff)
        else:
            acc[k] = t
            order.append(k)
    out = [acc[k] for k in order if not acc[k].is_zero()]
    out.sort(key=str)
    return tuple(out)


# functions ----------------------------------------------------------------------------------------


@dataclass(frozen=True)
class CFunction:
    terms: tuple = ()
    domain: F.Formula = F.TRUE

    @staticmethod
    def make(terms, domain: F.Formula = F.TRUE) -> "CFunction":
        return CFunction(_collect(terms), domain)

    @staticmethod
    def const(c) -> "CFunction":
        return CFunction.make([CTerm(as_aterm(c) if not isinstance(c, ATerm) else c)])

    @staticmethod
    def lin(L: LinForm) -> "CFunction":
        return CFunction.make([CTerm(alphas=(L,))])

    @staticmethod
    def indicator(f: F.Formula) -> "CFunction":
        return CFunction.make([CTerm(counts=(CountFactor(f),))])

    @property
    def has_s(self) -> bool:
        return any(t.has_s() for t in self.terms)

    @property
    def has_psi(self) -> bool:
        return any(t.has_psi() for t in self.terms)

    def free(self) -> set:
        out = set(free_vars(self.domain))
        for t in self.terms:
            out |= t.free()
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def absorb_domain(self) -> "CFunction":
        """Same function with the domain moved into the terms as an indicator."""
        if self.domain == F.TRUE:
            return self
        ind = CTerm(counts=(CountFactor(self.domain),))
        return CFunction.make([t * ind for t in self.terms])

    def __add__(self, other) -> "CFunction":
        other = as_cfun(other)
        if self.domain == other.domain:
            return CFunction.make(self.terms + other.terms, self.domain)
        a, b = self.absorb_domain(), other.absorb_domain()
        return CFunction.make(a.terms + b.terms)

    __radd__ = __add__

    def __neg__(self) -> "CFunction":
        return CFunction.make([t.scale(-1) for t in self.terms], self.domain)

    def __sub__(self, other) -> "CFunction":
        return self + (-as_cfun(other))

    def __rsub__(self, other) -> "CFunction":
        return as_cfun(other) + (-self)

    def __mul__(self, other) -> "CFunction":
        other = as_cfun(other)
        return CFunction.make([a * b for a in self.terms for b in other.terms], F.conj(self.domain, other.domain))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "CFunction":
        out = CFunction.const(1)
        for _ in range(k):
            out = out * self
        return out

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "domain": formula_to_json(self.domain),
            "domain_text": to_text(self.domain),
            "terms": [t.to_json() for t in self.terms],
            "text": str(self),
        }

    @staticmethod
    def from_json(d) -> "CFunction":
        return CFunction.make([CTerm.from_json(t) for t in d["terms"]], formula_from_json(d.get("domain", {"tag": "true"})))

    def __str__(self) -> str:
        body = " + ".join(str(t) for t in self.terms) if self.terms else "0"
        if self.domain == F.TRUE:
            return body
        return f"{body} on [{to_text(self.domain)}]"


def as_cfun(x) -> CFunction:
    if isinstance(x, CFunction):
        return x
    if isinstance(x, CTerm):
        return CFunction.make([x])
    if isinstance(x, (int, Fraction, ATerm)):
        return CFunction.const(x)
    if isinstance(x, LinForm):
        return CFunction.lin(x)
    raise TypeError(f"not a C-function: {x!r}")


# evaluation ----------------------------------------------------------------------------------------


class _Model:
    def __init__(self, p: Optional[int], q0, t, psi, preds=None):
        self.p = p
        self.q0 = Fraction(p) if q0 is None and p is not None else (Fraction(q0) if q0 is not None else None)
        if self.q0 is None or self.q0 <= 1:
            raise UnboundParameter("q")
        self.t = None if t is None else Fraction(t)
        self.psi = psi
        if p is not None:
            from ..padic.structure import QpStructure

            self.st = QpStructure(p, preds)
        else:
            self.st = Structure(None)

    def ord_const(self, prime: int) -> int:
        if self.p is None:
            raise ModelRequired(f"ord({prime}) needs a prime")
        return 1 if prime == self.p else 0


def _vg_env(point: dict) -> dict:
    out = {}
    for k, v in point.items():
        if isinstance(v, tuple):
            out[k] = v[0]
        elif hasattr(v, "ord") and callable(v.ord):
            out[k] = v.ord()
        else:
            out[k] = v
    return out


def _lin_value(L: LinForm, env: dict, m: _Model) -> Fraction:
    try:
        return L.evaluate(env, m.ord_const)
    except KeyError as e:
        raise UnboundParameter(f"no value for {e.args[0]}") from None


@lru_cache(maxsize=4096)
def _compiled(f: F.Formula, p: Optional[int], preds_key):
    from ..padic.structure import QpStructure

    st = QpStructure(p, dict(preds_key)) if p is not None else Structure(None)
    return compile_formula(f, st)


def _count(cf: CountFactor, point: dict, m: _Model, preds) -> int:
    if cf.vars and m.p is None:
        raise ModelRequired("counting residue-ring points needs a model (p)")
    needs_model = bool(ord_primes(cf.formula)) or any(v.sort.is_rf for v in free_vars(cf.formula))
    if needs_model and m.p is None:
        raise ModelRequired(f"{cf} needs a model (p)")
    fn = _compiled(cf.formula, m.p, tuple(sorted((preds or {}).items())))
    env = dict(point)
    try:
        if not cf.vars:
            return 1 if fn(env) else 0
        ranges = [range(m.st.rf_modulus(v.sort.n)) for v in cf.vars]
        total = 0
        for vals in itertools.product(*ranges):
            for v, x in zip(cf.vars, vals):
                env[v.name] = x
            if fn(env):
                total += 1
        return total
    except UnboundVariable as e:
        raise UnboundParameter(str(e)) from None
    except KeyError as e:
        raise UnboundParameter(f"no value for {e.args[0]}") from None


def _char(ch: CharFactor, point: dict, m: _Model):
    if m.p is None:
        raise ModelRequired("character factors need a model (p)")
    from ..padic.character import Character

    psi = m.psi or Character(m.p)
    arg = Fraction(0)
    if ch.h is not None:
        if ch.h not in point:
            raise UnboundParameter(ch.h)
        arg += Fraction(point[ch.h])
    if ch.e is not None:
        try:
            e = compile_rf(ch.e, m.st)(dict(point))
        except KeyError as err:
            raise UnboundParameter(f"no value for {err.args[0]}") from None
        arg += Fraction(int(e), ch.N)
    return psi(arg)


def eval_term(term: CTerm, point: dict, m: _Model, preds=None):
    env = _vg_env(point)
    val = term.coeff.eval(m.q0)
    if val == 0:
        return Fraction(0)
    for cf in term.counts:
        k = _count(cf, point, m, preds)
        if k == 0:
            return Fraction(0)
        val = val * k
    val = val * qpow(m.q0, _lin_value(term.beta, env, m))
    for L in term.alphas:
        val = val * _lin_value(L, env, m)
    if term.has_s():
        if m.t is None:
            raise UnboundParameter("t = q^(-s)")
        sg = _lin_value(term.sigma, env, m)
        if sg.denominator != 1:
            raise UnboundParameter("t-power with a fractional exponent")
        val = val * m.t ** int(sg)
        for a, b in term.sden:
            if Fraction(b).denominator != 1:
                raise UnboundParameter("t-power with a fractional exponent")
            val = val / (1 - qpow(m.q0, a) * m.t ** int(-b))
    for ch in term.chars:
        val = _char(ch, point, m) * val
    return val


def eval_cfun(
    f,
    point: dict,
    p: Optional[int] = None,
    q0=None,
    t=None,
    psi=None,
    preds=None,
):
    """Exact value of f at a point.

    In a model Q_p pass p (then q = p); for the abstract ring pass q0 > 1.
    t stands for q^(−s).  Outside the domain the value is 0.
    """
    f = as_cfun(f)
    m = _Model(p, q0, t, psi, preds)
    if f.domain != F.TRUE:
        if _count(CountFactor(f.domain), point, m, preds) == 0:
            return Fraction(0)
    total = Fraction(0)
    for term in f.terms:
        total = eval_term(term, point, m, preds) + total
    return total
