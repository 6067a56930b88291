"""Independent Presburger oracle: z3's qe tactic plus a numpy evaluator for
its quantifier-free output.  Used only by the tests."""
from __future__ import annotations

import numpy as np
import z3

from gdpkit.formula import formulas as F
from gdpkit.formula.terms import OrdConst, Var


def _term(t, ivars, ordv):
    e = z3.IntVal(t.const)
    for k, c in t.coeffs:
        if isinstance(k, OrdConst):
            e = e + c * ordv(k.prime)
        else:
            e = e + c * ivars.setdefault(k.name, z3.Int(k.name))
    return e


def to_z3(f, ordv, ivars=None):
    ivars = {} if ivars is None else ivars
    if isinstance(f, F.Const):
        return z3.BoolVal(f.value)
    if isinstance(f, F.Cmp):
        a, b = _term(f.lhs, ivars, ordv), _term(f.rhs, ivars, ordv)
        return a == b if f.op == "=" else (a < b if f.op == "<" else a <= b)
    if isinstance(f, F.Cong):
        return (_term(f.lhs, ivars, ordv) - _term(f.rhs, ivars, ordv)) % f.d == 0
    if isinstance(f, F.Not):
        return z3.Not(to_z3(f.arg, ordv, ivars))
    if isinstance(f, F.And):
        return z3.And(*[to_z3(a, ordv, ivars) for a in f.args])
    if isinstance(f, F.Or):
        return z3.Or(*[to_z3(a, ordv, ivars) for a in f.args])
    if isinstance(f, F.Implies):
        return z3.Implies(to_z3(f.lhs, ordv, ivars), to_z3(f.rhs, ordv, ivars))
    if isinstance(f, (F.Exists, F.Forall)):
        inner = dict(ivars)
        v = z3.Int(f.var.name)
        inner[f.var.name] = v
        body = to_z3(f.body, ordv, inner)
        return z3.Exists([v], body) if isinstance(f, F.Exists) else z3.ForAll([v], body)
    raise TypeError(f"unsupported node {f!r}")


def z3_qe(f, p: int):
    ordv = lambda q: 1 if q == p else 0
    goal = z3.Goal()
    goal.add(to_z3(f, ordv))
    res = z3.Then(z3.Tactic("qe2"), z3.Tactic("simplify"))(goal)
    return z3.Or(*[g.as_expr() for g in res]) if len(res) else z3.BoolVal(False)


def np_eval(e, arrays: dict, shape):
    k = e.decl().kind()
    ch = [np_eval(c, arrays, shape) for c in e.children()]
    if z3.is_true(e):
        return np.ones(shape, dtype=bool)
    if z3.is_false(e):
        return np.zeros(shape, dtype=bool)
    if z3.is_int_value(e):
        return np.full(shape, e.as_long(), dtype=object)
    if z3.is_const(e) and k == z3.Z3_OP_UNINTERPRETED:
        return arrays[e.decl().name()].astype(object)
    table = {
        z3.Z3_OP_AND: lambda: np.logical_and.reduce(ch),
        z3.Z3_OP_OR: lambda: np.logical_or.reduce(ch),
        z3.Z3_OP_NOT: lambda: ~ch[0],
        z3.Z3_OP_IMPLIES: lambda: ~ch[0] | ch[1],
        z3.Z3_OP_EQ: lambda: ch[0] == ch[1],
        z3.Z3_OP_DISTINCT: lambda: ch[0] != ch[1],
        z3.Z3_OP_LE: lambda: ch[0] <= ch[1],
        z3.Z3_OP_LT: lambda: ch[0] < ch[1],
        z3.Z3_OP_GE: lambda: ch[0] >= ch[1],
        z3.Z3_OP_GT: lambda: ch[0] > ch[1],
        z3.Z3_OP_ADD: lambda: sum(ch[1:], ch[0]),
        z3.Z3_OP_SUB: lambda: ch[0] - sum(ch[1:], 0 * ch[0]),
        z3.Z3_OP_UMINUS: lambda: -ch[0],
        z3.Z3_OP_MUL: lambda: np.prod(np.stack(ch), axis=0),
        z3.Z3_OP_MOD: lambda: ch[0] % ch[1],
        z3.Z3_OP_IDIV: lambda: ch[0] // ch[1],
        z3.Z3_OP_ITE: lambda: np.where(ch[0], ch[1], ch[2]),
        z3.Z3_OP_TO_INT: lambda: ch[0],
    }
    if k in table:
        out = table[k]()
        if out.dtype == object and e.sort() == z3.BoolSort():
            out = out.astype(bool)
        return out
    raise NotImplementedError(f"z3 operator {e.decl()}")


def oracle_mask(f, box: dict, p: int):
    names = list(box)
    grids = np.meshgrid(*[np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in box.values()], indexing="ij")
    shape = grids[0].shape if grids else ()
    return np.asarray(np_eval(z3_qe(f, p), dict(zip(names, grids)), shape), dtype=bool)
