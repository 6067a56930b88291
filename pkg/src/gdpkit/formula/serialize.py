"""JSON encoding of terms and formulas with explicit sort tags."""
from __future__ import annotations

from . import formulas as F
from .sorts import Sort
from .terms import INF, AcParam, Cross, OrdConst, OrdParam, Res, RFLit, RFOp, Var, VGTerm


def _key_to_json(k):
    if isinstance(k, Var):
        return {"var": k.name, "sort": k.sort.to_json()}
    if isinstance(k, OrdParam):
        return {"ordp": k.label}
    return {"ordc": k.prime}


def _key_from_json(d):
    if "var" in d:
        return Var(d["var"], Sort.from_json(d["sort"]))
    if "ordp" in d:
        return OrdParam(d["ordp"])
    return OrdConst(int(d["ordc"]))


def term_to_json(t):
    if isinstance(t, VGTerm):
        if t.inf:
            return {"t": "inf", "sort": {"kind": "vginf"}}
        return {
            "t": "vg",
            "sort": t.sort.to_json(),
            "coeffs": [[_key_to_json(k), c] for k, c in t.coeffs],
            "const": t.const,
        }
    if isinstance(t, Var):
        return {"t": "var", "name": t.name, "sort": t.sort.to_json()}
    if isinstance(t, AcParam):
        return {"t": "acp", "n": t.n, "label": t.label, "sort": t.sort.to_json()}
    if isinstance(t, RFLit):
        return {"t": "lit", "value": t.value, "sort": t.sort.to_json()}
    if isinstance(t, RFOp):
        return {"t": "op", "op": t.op, "args": [term_to_json(a) for a in t.args], "sort": t.sort.to_json()}
    if isinstance(t, Res):
        return {"t": "res", "m": t.m, "n": t.n, "arg": term_to_json(t.arg), "sort": t.sort.to_json()}
    if isinstance(t, Cross):
        return {"t": "cross", "n": t.n, "arg": term_to_json(t.arg), "sort": t.sort.to_json()}
    raise TypeError(f"not a term: {t!r}")


def term_from_json(d):
    tag = d["t"]
    if tag == "inf":
        return INF
    if tag == "vg":
        return VGTerm.make({_key_from_json(k): c for k, c in d["coeffs"]}, d["const"])
    if tag == "var":
        return Var(d["name"], Sort.from_json(d["sort"]))
    if tag == "acp":
        return AcParam(d["n"], d["label"])
    if tag == "lit":
        return RFLit(d["value"], d["sort"]["n"])
    if tag == "op":
        return RFOp(d["op"], tuple(term_from_json(a) for a in d["args"]), d["sort"]["n"])
    if tag == "res":
        return Res(d["m"], d["n"], term_from_json(d["arg"]))
    if tag == "cross":
        return Cross(d["n"], term_from_json(d["arg"]))
    raise ValueError(f"unknown term tag {tag!r}")


def formula_to_json(f):
    if isinstance(f, F.Const):
        return {"f": "const", "value": f.value}
    if isinstance(f, F.Cmp):
        return {"f": "cmp", "op": f.op, "lhs": term_to_json(f.lhs), "rhs": term_to_json(f.rhs)}
    if isinstance(f, F.Cong):
        return {"f": "cong", "d": f.d, "lhs": term_to_json(f.lhs), "rhs": term_to_json(f.rhs)}
    if isinstance(f, F.RFEq):
        return {"f": "rfeq", "lhs": term_to_json(f.lhs), "rhs": term_to_json(f.rhs)}
    if isinstance(f, F.AMem):
        return {"f": "amem", "n": f.n, "arg": term_to_json(f.arg)}
    if isinstance(f, F.Pred):
        return {"f": "pred", "name": f.name, "args": [term_to_json(a) for a in f.args]}
    if isinstance(f, F.Not):
        return {"f": "not", "arg": formula_to_json(f.arg)}
    if isinstance(f, (F.And, F.Or)):
        return {"f": "and" if isinstance(f, F.And) else "or", "args": [formula_to_json(a) for a in f.args]}
    if isinstance(f, F.Implies):
        return {"f": "imp", "lhs": formula_to_json(f.lhs), "rhs": formula_to_json(f.rhs)}
    if isinstance(f, (F.Exists, F.Forall)):
        return {
            "f": "ex" if isinstance(f, F.Exists) else "all",
            "var": f.var.name,
            "sort": f.var.sort.to_json(),
            "body": formula_to_json(f.body),
        }
    raise TypeError(f"not a formula: {f!r}")


def formula_from_json(d):
    tag = d["f"]
    if tag == "const":
        return F.Const(bool(d["value"]))
    if tag == "cmp":
        return F.Cmp(d["op"], term_from_json(d["lhs"]), term_from_json(d["rhs"]))
    if tag == "cong":
        return F.Cong(d["d"], term_from_json(d["lhs"]), term_from_json(d["rhs"]))
    if tag == "rfeq":
        return F.RFEq(term_from_json(d["lhs"]), term_from_json(d["rhs"]))
    if tag == "amem":
        return F.AMem(d["n"], term_from_json(d["arg"]))
    if tag == "pred":
        return F.Pred(d["name"], tuple(term_from_json(a) for a in d["args"]))
    if tag == "not":
        return F.Not(formula_from_json(d["arg"]))
    if tag == "and":
        return F.And(tuple(formula_from_json(a) for a in d["args"]))
    if tag == "or":
        return F.Or(tuple(formula_from_json(a) for a in d["args"]))
    if tag == "imp":
        return F.Implies(formula_from_json(d["lhs"]), formula_from_json(d["rhs"]))
    if tag in ("ex", "all"):
        v = Var(d["var"], Sort.from_json(d["sort"]))
        body = formula_from_json(d["body"])
        return F.Exists(v, body) if tag == "ex" else F.Forall(v, body)
    raise ValueError(f"unknown formula tag {tag!r}")
