"""Exact point enumeration for Presburger formulas on integer boxes."""
from __future__ import annotations

from typing import Mapping, Optional, Union

import numpy as np

from ..errors import BoxTooLarge, UnboundVariable
from ..formula import formulas as F
from ..formula.arith import factorize, vp
from ..formula.evaluate import Structure, evaluate
from ..formula.terms import OrdConst, OrdParam, Var, VGTerm
from ..formula.transform import free_vars, is_quantifier_free
from .linear import require_presburger

DEFAULT_BUDGET = 5_000_000


def ord_table(ordvals: Union[int, Mapping, None]):
    """Normalize an ord assignment to a function prime -> value.

    ordvals is a prime p (ord(q) = v_p(q)) or a mapping n -> ord(n); the
    mapping is read through the factorization of n.
    """
    if ordvals is None:
        return None
    if isinstance(ordvals, int):
        p = ordvals
        return lambda q: 1 if q == p else 0
    table = {}
    for n, v in ordvals.items():
        fs = factorize(int(n))
        if len(fs) == 1 and fs[0][1] == 1:
            table[fs[0][0]] = v
    for n, v in ordvals.items():
        fs = factorize(int(n))
        known = sum(e * table.get(q, 0) for q, e in fs)
        if len(fs) == 1 and fs[0][0] not in table and v % fs[0][1] == 0:
            table[fs[0][0]] = v // fs[0][1]
        elif known != v and all(q in table for q, _ in fs):
            raise ValueError(f"inconsistent ord values at {n}")

    def look(q):
        if q not in table:
            raise UnboundVariable(f"ord({q})")
        return table[q]

    return look


class _OrdStructure(Structure):
    def __init__(self, look):
        super().__init__(None)
        self._look = look

    def ord_const(self, prime: int) -> int:
        if self._look is None:
            raise UnboundVariable(f"ord({prime}) needs ord values")
        return self._look(prime)


def eval_assignment(f: F.Formula, sigma: dict, ordvals=None) -> bool:
    """Truth of f under sigma (ints or math.inf) with the given ord values."""
    return evaluate(f, sigma, st=_OrdStructure(ord_table(ordvals)))


def _vg_array(t: VGTerm, arrays: dict, look, shape):
    if t.inf:
        raise ValueError("+inf inside a box enumeration")
    out = np.full(shape, t.const, dtype=np.int64)
    for k, c in t.coeffs:
        if isinstance(k, OrdConst):
            if look is None:
                raise UnboundVariable(f"ord({k.prime})")
            out += c * look(k.prime)
        else:
            name = k.name if isinstance(k, Var) else k.label
            if name not in arrays:
                raise UnboundVariable(name)
            out = out + c * arrays[name]
    return out


def _eval_np(f, arrays, look, shape):
    if isinstance(f, F.Const):
        return np.full(shape, f.value, dtype=bool)
    if isinstance(f, F.Cmp):
        a = _vg_array(f.lhs, arrays, look, shape)
        b = _vg_array(f.rhs, arrays, look, shape)
        return a == b if f.op == "=" else (a < b if f.op == "<" else a <= b)
    if isinstance(f, F.Cong):
        a = _vg_array(f.lhs - f.rhs, arrays, look, shape)
        return np.mod(a, f.d) == 0
    if isinstance(f, F.Not):
        return ~_eval_np(f.arg, arrays, look, shape)
    if isinstance(f, F.And):
        out = np.ones(shape, dtype=bool)
        for g in f.args:
            out &= _eval_np(g, arrays, look, shape)
        return out
    if isinstance(f, F.Or):
        out = np.zeros(shape, dtype=bool)
        for g in f.args:
            out |= _eval_np(g, arrays, look, shape)
        return out
    if isinstance(f, F.Implies):
        return ~_eval_np(f.lhs, arrays, look, shape) | _eval_np(f.rhs, arrays, look, shape)
    raise TypeError(f"not a quantifier-free Presburger formula: {f}")


def box_mask(f: F.Formula, box: dict, ordvals=None, budget: int = DEFAULT_BUDGET, fixed: Optional[dict] = None):
    """Boolean array over the box (axes in the order of box's keys)."""
    require_presburger(f)
    if not is_quantifier_free(f):
        from .cooper import pres_qe

        f = pres_qe(f)
    names = list(box)
    sizes = [max(0, hi - lo + 1) for lo, hi in (box[n] for n in names)]
    total = int(np.prod(sizes, dtype=object)) if sizes else 1
    if total > budget:
        raise BoxTooLarge(f"{total} points exceed the budget of {budget}")
    grids = np.meshgrid(*[np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in (box[n] for n in names)], indexing="ij")
    arrays = dict(zip(names, grids))
    shape = tuple(sizes)
    for k, v in (fixed or {}).items():
        arrays[k] = np.full(shape, v, dtype=np.int64)
    return _eval_np(f, arrays, ord_table(ordvals), shape)


def enumerate_box(f: F.Formula, box: dict, ordvals=None, budget: int = DEFAULT_BUDGET, fixed: Optional[dict] = None) -> list:
    """Satisfying integer points of f in box = {name: (lo, hi)}, as tuples in
    the order of box's keys; variables outside the box come from fixed."""
    mask = box_mask(f, box, ordvals, budget, fixed)
    lows = np.array([box[n][0] for n in box], dtype=np.int64)
    pts = np.argwhere(mask) + lows
    return [tuple(int(v) for v in row) for row in pts]
