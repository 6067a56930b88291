"""Pretty-printer producing text the parser reads back to the same AST."""
from __future__ import annotations

from .terms import AcParam, Cross, OrdConst, OrdParam, Res, RFLit, RFOp, Var, VGTerm


def _key_str(k) -> str:
    if isinstance(k, Var):
        return k.name
    return str(k)


def vg_str(t: VGTerm) -> str:
    if t.inf:
        return "inf"
    parts = []
    for k, c in t.coeffs:
        name = _key_str(k)
        mag = abs(c)
        body = name if mag == 1 else f"{mag}*{name}"
        parts.append(("-" if c < 0 else "+", body))
    if t.const or not parts:
        parts.append(("-" if t.const < 0 else "+", str(abs(t.const))))
    s0, b0 = parts[0]
    out = ("-" if s0 == "-" else "") + b0
    for s, b in parts[1:]:
        out += f" {s} {b}"
    return out


def _synthesizes(t) -> bool:
    """Whether the parser can recover the sort of t without outside context."""
    if isinstance(t, RFLit):
        return False
    if isinstance(t, RFOp):
        return any(_synthesizes(a) for a in t.args)
    return True


def rf_str(t, ascribe: bool = False) -> str:
    if ascribe and not _synthesizes(t):
        return f"({rf_str(t)} : rf[{t.n}])"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, AcParam):
        return str(t)
    if isinstance(t, RFLit):
        return str(t.value)
    if isinstance(t, Cross):
        return f"cross[{t.n}]({vg_str(t.arg)})"
    if isinstance(t, Res):
        return f"res[{t.m}->{t.n}]({rf_str(t.arg)})"
    if isinstance(t, RFOp):
        if t.op == "-":
            a = t.args[0]
            if isinstance(a, (Var, AcParam, Cross, Res)):
                return "-" + rf_str(a)
            return f"-({rf_str(a)})"
        if t.op == "+":
            out = ""
            for i, a in enumerate(t.args):
                if i and isinstance(a, RFOp) and a.op == "-":
                    out += " - " + _rf_factor(a.args[0], in_sum=True)
                elif isinstance(a, RFOp) and a.op == "+":
                    out += ("" if i == 0 else " + ") + f"({rf_str(a)})"
                else:
                    out += ("" if i == 0 else " + ") + rf_str(a)
            return out
        return "*".join(_rf_factor(a) for a in t.args)
    raise TypeError(f"not an RF term: {t!r}")


def _rf_factor(a, in_sum: bool = False) -> str:
    if isinstance(a, RFOp):
        if in_sum and a.op in ("*", "-"):
            return rf_str(a)
        return f"({rf_str(a)})"
    if isinstance(a, RFLit) and a.value < 0:
        return f"({a.value})"
    return rf_str(a)


def _prec(f) -> int:
    from .formulas import And, Const, Exists, Forall, Implies, Not, Or

    if isinstance(f, (Exists, Forall)):
        return 0
    if isinstance(f, Implies):
        return 1
    if isinstance(f, Or):
        return 2
    if isinstance(f, And):
        return 3
    if isinstance(f, Not):
        return 4
    return 5


def _wrap(f, level: int) -> str:
    s = _fstr(f)
    return f"({s})" if _prec(f) < level else s


def _fstr(f) -> str:
    from .formulas import AMem, And, Cmp, Cong, Const, Exists, Forall, Implies, Not, Or, Pred, RFEq

    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Cmp):
        return f"{vg_str(f.lhs)} {f.op} {vg_str(f.rhs)}"
    if isinstance(f, Cong):
        return f"{vg_str(f.lhs)} ≡{{{f.d}}} {vg_str(f.rhs)}"
    if isinstance(f, RFEq):
        both_open = not _synthesizes(f.lhs) and not _synthesizes(f.rhs)
        return f"{rf_str(f.lhs, ascribe=both_open)} = {rf_str(f.rhs)}"
    if isinstance(f, AMem):
        return f"A[{f.n}]({rf_str(f.arg)})"
    if isinstance(f, Pred):
        return f"Phi.{f.name}(" + ", ".join(rf_str(a, ascribe=True) for a in f.args) + ")"
    if isinstance(f, Not):
        return "~" + _wrap(f.arg, 5)
    if isinstance(f, And):
        return " /\\ ".join(_wrap(a, 4) for a in f.args)
    if isinstance(f, Or):
        return " \\/ ".join(_wrap(a, 3) for a in f.args)
    if isinstance(f, Implies):
        return f"{_wrap(f.lhs, 2)} -> {_wrap(f.rhs, 1)}"
    if isinstance(f, (Exists, Forall)):
        q = "EX" if isinstance(f, Exists) else "ALL"
        return f"{q} {f.var.name}:{f.var.sort}. {_fstr(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def to_text(f, declare: bool = False) -> str:
    """Render a formula; with declare=True free variables get a VARS header."""
    body = _fstr(f)
    if declare:
        from .transform import free_vars

        fv = sorted(free_vars(f), key=lambda v: v.name)
        if fv:
            decl = ", ".join(f"{v.name}:{v.sort}" for v in fv)
            return f"VARS {decl}. {body}"
    return body


def term_str(t) -> str:
    if isinstance(t, VGTerm):
        return vg_str(t)
    if isinstance(t, (OrdParam, OrdConst)):
        return str(t)
    return rf_str(t)
