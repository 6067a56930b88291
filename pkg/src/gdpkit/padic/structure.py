"""Q_p as a structure for the two-sorted language, and formula evaluation in it."""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Mapping, Optional

from ..errors import InsufficientPrecision, UnboundVariable
from ..formula import formulas as F
from ..formula.arith import vp
from ..formula.evaluate import INF, Structure, compile_formula
from ..formula.terms import AcParam, OrdParam
from ..formula.transform import atoms
from .element import A_set, PadicElement, ResidueRingElem, cross


class QpStructure(Structure):
    """RF_n = Z/p^(v_p(n)+1), cross_n, A_n and named predicates over Q_p.

    Opaque parameters ord{x} and ac[n]{x} read the environment entry for
    label x, which is a PadicElement or a (valuation, unit) pair.
    """

    def __init__(self, p: int, preds: Optional[Mapping[str, Callable]] = None, vg_window=None):
        super().__init__(p, vg_window)
        self.preds = dict(preds or {})

    def rf_modulus(self, n: int) -> int:
        return self.p ** (vp(n, self.p) + 1)

    def cross(self, n: int, gamma) -> int:
        return cross(self.p, n, gamma)

    def in_A(self, n: int, v: int) -> bool:
        return v % self.rf_modulus(n) in self._A(n)

    def _A(self, n):
        return set(A_set(self.p, n))

    def A_elements(self, n: int) -> list:
        return A_set(self.p, n)

    def pred(self, name: str, args: tuple) -> bool:
        if name not in self.preds:
            from ..errors import ModelRequired

            raise ModelRequired(f"no interpretation supplied for Phi.{name}")
        return bool(self.preds[name](*args))

    def ord_param(self, label: str, env: dict):
        x = _lookup(env, label)
        if isinstance(x, tuple):
            return x[0]
        if isinstance(x, PadicElement):
            return x.ord()
        return x

    def ac_param(self, n: int, label: str, env: dict) -> int:
        x = _lookup(env, label)
        k = vp(n, self.p) + 1
        if isinstance(x, tuple):
            v, u = x
            return 0 if v == INF else u % self.p**k
        if isinstance(x, PadicElement):
            return x.ac(n).value
        raise TypeError(f"parameter {label} is not a field element")


def _lookup(env, label):
    try:
        return env[label]
    except KeyError:
        raise UnboundVariable(label) from None


def _normalize_env(sigma: dict, p: int) -> dict:
    env = {}
    for k, v in sigma.items():
        if isinstance(v, ResidueRingElem):
            env[k] = v.value
        else:
            env[k] = v
    return env


def _field_labels(f) -> dict:
    """label -> largest unit precision k needed for ac parameters."""
    out: dict = {}

    def visit_term(t):
        from ..formula.terms import Cross, RFOp, Res, VGTerm, rf_children

        if isinstance(t, VGTerm):
            for k, _ in t.coeffs:
                if isinstance(k, OrdParam):
                    out.setdefault(k.label, 0)
            return
        if isinstance(t, AcParam):
            out[t.label] = max(out.get(t.label, 0), t.n)
            return
        if isinstance(t, Cross):
            visit_term(t.arg)
            return
        for c in rf_children(t):
            visit_term(c)

    from ..formula.transform import _rf_terms_of_atom, _vg_terms_of_atom

    for a in atoms(f):
        for t in _vg_terms_of_atom(a):
            visit_term(t)
        for t in _rf_terms_of_atom(a):
            visit_term(t)
    return out


def _worlds(x: PadicElement, k: int, window: int):
    """All (valuation, unit mod p^k) pairs compatible with x."""
    p = x.p
    if x.is_exact:
        if x.a == 0:
            return [(INF, 0)]
        return [(x.ord(), x.unit(k) if k else 1)]
    units = [u for u in range(p**k) if u % p] if k else [1]
    if x.ord_known():
        v = x.ord()
        rp = x.rel_prec()
        if rp >= k:
            return [(v, x.unit(k) if k else 1)]
        base = x.unit(rp) if rp else None
        return [(v, u) for u in units if base is None or u % p**rp == base]
    lo = x.N
    return [(v, u) for v in list(range(lo, lo + window)) + [INF] for u in (units if v != INF else [0])]


def eval_formula_model(
    f: F.Formula,
    sigma: dict,
    p: int,
    m: Optional[int] = None,
    preds: Optional[Mapping[str, Callable]] = None,
    window: int = 48,
    max_worlds: int = 200_000,
) -> bool:
    """Truth of f in Q_p under sigma, or InsufficientPrecision when the known
    digits of the field parameters do not determine it.

    Field parameters (labels of ord{x}, ac[n]{x}) take PadicElement values;
    plain ints and Fractions are read as exact elements.  When m is given,
    exact parameter values are first truncated to absolute precision p^m.
    """
    st = QpStructure(p, preds)
    env = _normalize_env(sigma, p)
    labels = _field_labels(f)
    choices = []
    for label, n in labels.items():
        x = env.get(label)
        if x is None:
            raise UnboundVariable(label)
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            x = PadicElement.exact(p, x)
            if m is not None:
                x = PadicElement.approx(p, x.a, m)
        k = vp(n, p) + 1 if n else 0
        choices.append((label, _worlds(x, k, window)))
    total = 1
    for _, ws in choices:
        total *= len(ws)
    if total > max_worlds:
        raise InsufficientPrecision(f"{total} compatible completions exceed the refinement budget")
    g = compile_formula(f, st)
    result = None
    for combo in itertools.product(*[ws for _, ws in choices]):
        e = dict(env)
        for (label, _), w in zip(choices, combo):
            e[label] = w
        val = g(e)
        if result is None:
            result = val
        elif val != result:
            raise InsufficientPrecision("the known digits do not determine the formula")
    return bool(result) if result is not None else bool(g(env))
