"""A small text syntax for C-class functions.

A function is a sum of products.  Factors:

    3, 2/3          rational constants
    q, q^2, q^(L)   powers of q (L linear in value-group variables)
    t, t^(L)        powers of t = q^(−s)
    (L)             a polynomial factor α = L; a parenthesized sum is also allowed
    [F]             the indicator of a formula
    #{xi:rf[4], ... : F}
                    the number of residue-ring points of F
    geom(i)         1/(1 − q^(−i));  likewise "/(1 - q^(-i))"
    sden(a, b)      1/(1 − q^(a + b s))
    psi(h, e, N)    ψ(h + e/N), h a field parameter name or 0, e an RF_N term

Variable sorts come from a context mapping such as {"x": "vg", "xi": "rf[4]"};
names not listed are inferred by the formula parser.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from ..errors import FormulaSyntaxError
from ..formula.parser import parse_formula, parse_term
from ..formula.sorts import RF, VG, parse_sort
from ..formula.terms import Var
from ..presburger.linear import LinForm
from .aring import ATerm
from .cterm import CFunction, CharFactor, CountFactor, CTerm

_OPEN = {"(": ")", "[": "]", "{": "}"}
_NUM = re.compile(r"^\d+(/\d+)?$")
_COUNT = re.compile(r"^\s*((?:[A-Za-z_]\w*\s*:\s*rf\[\d+\]\s*,\s*)*[A-Za-z_]\w*\s*:\s*rf\[\d+\])\s*:(.*)$", re.S)
_GEOM_DEN = re.compile(r"^\(?\s*1\s*-\s*q\^\(\s*-\s*(\d+(?:/\d+)?)\s*\)\s*\)?$")


def _frac(s: str) -> Fraction:
    a, _, b = s.partition("/")
    return Fraction(int(a), int(b or 1))


def _split_top(text: str, ops: str) -> list:
    """Split at top-level operator characters; returns [(op, chunk), ...]."""
    out, depth, cur, op = [], [], [], ""
    prev = ""
    for ch in text:
        if ch in _OPEN:
            depth.append(_OPEN[ch])
        elif depth and ch == depth[-1]:
            depth.pop()
        elif ch in ")]}":
            raise FormulaSyntaxError(f"unbalanced {ch!r} in {text!r}")
        if not depth and ch in ops and ch not in "([{)]}":
            unary = ch == "-" and (not "".join(cur).strip() or prev in "^*/(")
            if not unary:
                out.append((op, "".join(cur).strip()))
                cur, op = [], ch
                prev = ch
                continue
        cur.append(ch)
        if not ch.isspace():
            prev = ch
    if depth:
        raise FormulaSyntaxError(f"unclosed bracket in {text!r}")
    out.append((op, "".join(cur).strip()))
    return out


def _lin(text: str, context: dict) -> LinForm:
    return LinForm.from_vg(parse_term(text, VG, context))


def _exponent(text: str) -> str:
    text = text.strip()
    return text[1:-1] if text.startswith("(") and text.endswith(")") else text


def _one(term: CTerm) -> CFunction:
    return CFunction.make([term])


def _args(inner: str) -> list:
    return [c for _, c in _split_top(inner, ",")]


def _factor(text: str, context: dict) -> CFunction:
    if not text:
        raise FormulaSyntaxError("empty factor")
    if text.startswith("-"):
        return _factor(text[1:].strip(), context) * CFunction.const(-1)
    if _NUM.match(text):
        return CFunction.const(_frac(text))
    m = re.match(r"^([qt])(?:\s*\^\s*(.+))?$", text, re.S)
    if m:
        L = _lin(_exponent(m.group(2)) if m.group(2) else "1", context)
        if m.group(1) == "t":
            return _one(CTerm(sigma=L))
        if not L.coeffs:
            return _one(CTerm(coeff=ATerm.qpower(L.const)))
        return _one(CTerm(beta=L))
    if text.startswith("[") and text.endswith("]"):
        return CFunction.indicator(parse_formula(text[1:-1], context))
    if text.startswith("#{") and text.endswith("}"):
        m = _COUNT.match(text[2:-1])
        if not m:
            raise FormulaSyntaxError(f"malformed count factor {text!r}")
        decl = [tuple(x.strip() for x in d.split(":")) for d in m.group(1).split(",")]
        ctx = dict(context)
        ctx.update(decl)
        f = parse_formula(m.group(2), ctx)
        vs = tuple(Var(n, parse_sort(s)) for n, s in decl)
        return _one(CTerm(counts=(CountFactor(f, vs),)))
    m = re.match(r"^(geom|sden|psi)\s*\((.*)\)$", text, re.S)
    if m:
        name, args = m.group(1), _args(m.group(2))
        if name == "geom" and len(args) == 1:
            return _one(CTerm(coeff=ATerm.geometric(_frac(args[0]))))
        if name == "sden" and len(args) == 2:
            return _one(CTerm(sden=((_frac(args[0]), _frac(args[1].replace(" ", ""))),)))
        if name == "psi" and len(args) == 3:
            N = int(args[2])
            h = None if args[0] in ("", "0") else args[0]
            e = None if args[1] in ("", "0") else parse_term(args[1], RF(N), context)
            return _one(CTerm(chars=(CharFactor(h, e, N),)))
        raise FormulaSyntaxError(f"wrong arguments in {text!r}")
    if text.startswith("(") and text.endswith(")") and len(_split_top(text, ",")) == 1:
        inner = text[1:-1]
        try:
            L = _lin(inner, context)
        except (FormulaSyntaxError, ValueError, TypeError):
            return parse_cfun(inner, context)
        return CFunction.const(L.const) if not L.coeffs else _one(CTerm(alphas=(L,)))
    try:
        L = _lin(text, context)
    except (FormulaSyntaxError, ValueError, TypeError):
        raise FormulaSyntaxError(f"cannot read factor {text!r}") from None
    return CFunction.const(L.const) if not L.coeffs else _one(CTerm(alphas=(L,)))


def _divisor(text: str) -> ATerm:
    text = text.strip()
    if _NUM.match(text):
        return ATerm.const(1 / _frac(text))
    inner = text[1:-1] if text.startswith("((") or (text.startswith("(") and "*" in text) else text
    out = ATerm.const(1)
    for _, part in _split_top(inner, "*"):
        m = _GEOM_DEN.match(part)
        if not m:
            raise FormulaSyntaxError(f"can only divide by constants and (1 - q^(-i)): {text!r}")
        out = out * ATerm.geometric(_frac(m.group(1)))
    return out


def parse_cfun(text: str, context: Optional[dict] = None) -> CFunction:
    """Read a C-class function from its text form."""
    context = dict(context or {})
    total = CFunction()
    for sign, chunk in _split_top(text, "+-"):
        if not chunk:
            raise FormulaSyntaxError(f"empty summand in {text!r}")
        f = CFunction.const(1)
        for op, fac in _split_top(chunk, "*/"):
            if op == "/":
                f = f * _one(CTerm(coeff=_divisor(fac)))
            else:
                f = f * _factor(fac, context)
        total = total - f if sign == "-" else total + f
    return total
