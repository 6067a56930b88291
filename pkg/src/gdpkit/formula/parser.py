"""Parser for the formula DSL.

Free variables get their sorts from an optional ``VARS x:vg, xi:rf[4].``
header, from a caller-supplied context, or by inference from the
positions they occur in (default: value group).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from ..errors import FormulaSyntaxError, SortError
from . import formulas as F
from .sorts import RF, VG, VGINF, Sort, parse_sort
from .terms import INF, AcParam, Cross, OrdParam, Res, RFLit, RFOp, Var, VGTerm

_UNICODE = {"∧": "/\\", "∨": "\\/", "¬": "~", "→": "->", "≤": "<=", "≥": ">=", "≠": "!="}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>/\\|\\/|->|<=|>=|!=|==|≡|[~<>=(){}\[\],.:+\-*])
    """,
    re.VERBOSE,
)


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    for u, a in _UNICODE.items():
        text = text.replace(u, a)
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            toks.append(Tok(kind, s, line, pos - line_start + 1))
        for i, ch in enumerate(s):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    toks.append(Tok("eof", "", line, pos - line_start + 1))
    return toks


_RELOPS = ("=", "<", "<=", ">", ">=", "!=", "≡", "==")


class _Parser:
    """Recursive descent producing a raw tuple tree."""

    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # token helpers
    def peek(self, k: int = 0) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind in ("op", "ident") and t.text == text

    def next(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Tok:
        t = self.peek()
        if t.text != text or t.kind == "eof":
            self.fail(f"expected {text!r}, found {t.text or 'end of input'!r}", t)
        return self.next()

    def expect_int(self) -> int:
        t = self.peek()
        if t.kind != "int":
            self.fail(f"expected an integer, found {t.text or 'end of input'!r}", t)
        self.next()
        return int(t.text)

    def expect_ident(self) -> str:
        t = self.peek()
        if t.kind != "ident":
            self.fail(f"expected an identifier, found {t.text or 'end of input'!r}", t)
        self.next()
        return t.text

    def fail(self, msg: str, tok: Optional[Tok] = None):
        tok = tok or self.peek()
        raise FormulaSyntaxError(msg, tok.line, tok.col)

    # grammar
    def parse(self):
        f = self.formula()
        if self.peek().kind != "eof":
            self.fail(f"unexpected {self.peek().text!r}")
        return f

    def sort(self):
        t = self.peek()
        name = self.expect_ident()
        if name == "rf":
            self.expect("[")
            n = self.expect_int()
            self.expect("]")
            try:
                return RF(n)
            except SortError as e:
                raise FormulaSyntaxError(str(e), t.line, t.col) from None
        try:
            return parse_sort(name)
        except SortError:
            self.fail(f"unknown sort {name!r}", t)

    def binders(self):
        out = []
        while True:
            name = self.expect_ident()
            self.expect(":")
            out.append((name, self.sort()))
            if self.at(","):
                self.next()
                continue
            self.expect(".")
            return out

    def formula(self):
        if self.at("VARS"):
            self.next()
            decls = self.binders()
            return ("vars", decls, self.formula())
        return self.implication()

    def quantified(self):
        q = self.next().text
        bs = self.binders()
        body = self.formula()
        for name, s in reversed(bs):
            body = ("ex" if q == "EX" else "all", name, s, body)
        return body

    def implication(self):
        if self.at("EX") or self.at("ALL"):
            return self.quantified()
        lhs = self.disjunction()
        if self.at("->"):
            self.next()
            return ("imp", lhs, self.implication())
        return lhs

    def disjunction(self):
        parts = [self.conjunction()]
        while self.at("\\/"):
            self.next()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else ("or", parts)

    def conjunction(self):
        parts = [self.unary()]
        while self.at("/\\"):
            self.next()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else ("and", parts)

    def unary(self):
        if self.at("~"):
            self.next()
            return ("not", self.unary())
        if self.at("EX") or self.at("ALL"):
            return self.quantified()
        if self.at("true"):
            self.next()
            return ("const", True)
        if self.at("false"):
            self.next()
            return ("const", False)
        if self.at("A") and self.at("[", 1):
            self.next()
            self.expect("[")
            n = self.expect_int()
            self.expect("]")
            self.expect("(")
            t = self.term()
            self.expect(")")
            return ("amem", n, t)
        if self.at("Phi") and self.at(".", 1):
            self.next()
            self.next()
            name = self.expect_ident()
            self.expect("(")
            args = []
            if not self.at(")"):
                args.append(self.term())
                while self.at(","):
                    self.next()
                    args.append(self.term())
            self.expect(")")
            return ("pred", name, args)
        if self.at("("):
            save = self.i
            try:
                return self.relation()
            except FormulaSyntaxError:
                self.i = save
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        return self.relation()

    def relation(self):
        lhs = self.term()
        t = self.peek()
        if t.kind != "op" or t.text not in _RELOPS:
            self.fail(f"expected a relation, found {t.text or 'end of input'!r}", t)
        self.next()
        op = t.text
        d = None
        if op == "≡" or op == "==":
            self.expect("{")
            d = self.expect_int()
            self.expect("}")
            if d < 2:
                self.fail("congruence modulus must be at least 2", t)
        rhs = self.term()
        if d is not None:
            return ("cong", d, lhs, rhs, (t.line, t.col))
        return ("rel", op, lhs, rhs, (t.line, t.col))

    def term(self):
        lhs = self.product()
        while self.at("+") or self.at("-"):
            op = self.next().text
            rhs = self.product()
            lhs = ("add", lhs, rhs) if op == "+" else ("sub", lhs, rhs)
        return lhs

    def product(self):
        lhs = self.signed()
        while self.at("*"):
            self.next()
            lhs = ("mul", lhs, self.signed())
        return lhs

    def signed(self):
        if self.at("-"):
            self.next()
            if self.peek().kind == "int":
                return ("int", -int(self.next().text))
            return ("neg", self.signed())
        return self.primary()

    def primary(self):
        t = self.peek()
        if t.kind == "int":
            self.next()
            return ("int", int(t.text))
        if self.at("inf"):
            self.next()
            return ("inf",)
        if self.at("ord") and self.at("(", 1):
            self.next()
            self.next()
            n = self.expect_int()
            self.expect(")")
            if n < 1:
                self.fail("ord(n) needs n >= 1", t)
            return ("ord", n)
        if self.at("ord") and self.at("{", 1):
            self.next()
            self.next()
            label = self.expect_ident()
            self.expect("}")
            return ("ordp", label)
        if self.at("ac") and self.at("[", 1):
            self.next()
            self.next()
            n = self.expect_int()
            self.expect("]")
            self.expect("{")
            label = self.expect_ident()
            self.expect("}")
            return ("acp", n, label)
        if self.at("cross") and self.at("[", 1):
            self.next()
            self.next()
            n = self.expect_int()
            self.expect("]")
            self.expect("(")
            a = self.term()
            self.expect(")")
            return ("cross", n, a, (t.line, t.col))
        if self.at("res") and self.at("[", 1):
            self.next()
            self.next()
            m = self.expect_int()
            self.expect("->")
            n = self.expect_int()
            self.expect("]")
            self.expect("(")
            a = self.term()
            self.expect(")")
            return ("res", m, n, a, (t.line, t.col))
        if self.at("("):
            self.next()
            a = self.term()
            if self.at(":"):
                self.next()
                s = self.sort()
                self.expect(")")
                return ("asc", a, s)
            self.expect(")")
            return ("paren", a)
        if t.kind == "ident" and t.text not in ("EX", "ALL", "VARS", "A", "Phi"):
            self.next()
            return ("var", t.text, (t.line, t.col))
        self.fail(f"unexpected {t.text or 'end of input'!r} in term", t)


# ---------------------------------------------------------------------------
# sort inference


class _Infer:
    """Collects sort constraints on free variables (union-find with sorts)."""

    def __init__(self, known: dict):
        self.parent: dict = {}
        self.sort: dict = {}
        for k, s in known.items():
            self.parent[k] = k
            self.sort[k] = s

    def find(self, a):
        self.parent.setdefault(a, a)
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def assign(self, name, s: Sort, where=None):
        r = self.find(name)
        old = self.sort.get(r)
        if old is None:
            self.sort[r] = s
        elif not _compatible(old, s):
            raise SortError(f"variable {name!r} used with sorts {old} and {s}" + _at(where))

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        sa, sb = self.sort.get(ra), self.sort.get(rb)
        if sa and sb and not _compatible(sa, sb):
            raise SortError(f"variables {a!r} and {b!r} have sorts {sa} and {sb}")
        self.parent[ra] = rb
        if sb is None and sa is not None:
            self.sort[rb] = sa

    def get(self, name) -> Sort:
        return self.sort.get(self.find(name)) or VG


def _at(where) -> str:
    return f" at line {where[0]}, column {where[1]}" if where else ""


def _compatible(a: Sort, b: Sort) -> bool:
    if a.is_vg and b.is_vg:
        return True
    return a == b


def _infer_term(raw, expected, scope, inf: _Infer):
    """Return a Sort, ('free', name) or None for polymorphic literals."""
    tag = raw[0]
    if tag == "paren":
        return _infer_term(raw[1], expected, scope, inf)
    if tag == "int":
        return None
    if tag == "var":
        name = raw[1]
        if name in scope:
            s = scope[name]
            if expected is not None and not _compatible(s, expected):
                raise SortError(f"{name!r} has sort {s}, expected {expected}" + _at(raw[2]))
            return s
        if expected is not None:
            inf.assign(name, expected, raw[2])
            return inf.sort[inf.find(name)]
        return ("free", name)
    if tag in ("inf", "ordp"):
        return VGINF
    if tag == "ord":
        return VG
    if tag == "acp":
        return RF(raw[1])
    if tag == "cross":
        _infer_term(raw[2], VG, scope, inf)
        return RF(raw[1])
    if tag == "res":
        _infer_term(raw[3], RF(raw[1]), scope, inf)
        return RF(raw[2])
    if tag == "asc":
        _infer_term(raw[1], raw[2], scope, inf)
        return raw[2]
    if tag == "neg":
        return _infer_term(raw[1], expected, scope, inf)
    if tag in ("add", "sub", "mul"):
        a = _infer_term(raw[1], expected, scope, inf)
        b = _infer_term(raw[2], expected, scope, inf)
        return _join(a, b, scope, inf)
    raise FormulaSyntaxError(f"unknown term node {tag}")


def _join(a, b, scope, inf: _Infer):
    if isinstance(a, tuple) and isinstance(b, tuple):
        inf.union(a[1], b[1])
        return a
    if isinstance(a, tuple) and isinstance(b, Sort):
        inf.assign(a[1], b)
        return b
    if isinstance(b, tuple) and isinstance(a, Sort):
        inf.assign(b[1], a)
        return a
    if isinstance(a, Sort) and isinstance(b, Sort) and not _compatible(a, b):
        raise SortError(f"cannot combine terms of sorts {a} and {b}")
    return a if a is not None else b


def _infer_formula(raw, scope, inf: _Infer):
    tag = raw[0]
    if tag == "const":
        return
    if tag == "vars":
        for name, s in raw[1]:
            inf.assign(name, s)
        _infer_formula(raw[2], scope, inf)
        return
    if tag == "rel":
        op = raw[1]
        if op in ("=", "!="):
            a = _infer_term(raw[2], None, scope, inf)
            b = _infer_term(raw[3], None, scope, inf)
            _join(a, b, scope, inf)
        else:
            _infer_term(raw[2], VG, scope, inf)
            _infer_term(raw[3], VG, scope, inf)
        return
    if tag == "cong":
        _infer_term(raw[2], VG, scope, inf)
        _infer_term(raw[3], VG, scope, inf)
        return
    if tag == "amem":
        _infer_term(raw[2], RF(raw[1]), scope, inf)
        return
    if tag == "pred":
        for a in raw[2]:
            _infer_term(a, None, scope, inf)
        return
    if tag == "not":
        _infer_formula(raw[1], scope, inf)
        return
    if tag in ("and", "or"):
        for a in raw[1]:
            _infer_formula(a, scope, inf)
        return
    if tag == "imp":
        _infer_formula(raw[1], scope, inf)
        _infer_formula(raw[2], scope, inf)
        return
    if tag in ("ex", "all"):
        inner = dict(scope)
        inner[raw[1]] = raw[2]
        _infer_formula(raw[3], inner, inf)
        return
    raise FormulaSyntaxError(f"unknown formula node {tag}")


# ---------------------------------------------------------------------------
# elaboration


class _Elab:
    def __init__(self, inf: _Infer):
        self.inf = inf

    def var_sort(self, name, scope) -> Sort:
        if name in scope:
            return scope[name]
        return self.inf.get(name)

    def synth(self, raw, scope):
        tag = raw[0]
        if tag == "paren":
            return self.synth(raw[1], scope)
        if tag == "int":
            return None
        if tag == "var":
            return self.var_sort(raw[1], scope)
        if tag in ("inf", "ordp"):
            return VGINF
        if tag == "ord":
            return VG
        if tag in ("acp", "cross"):
            return RF(raw[1])
        if tag == "res":
            return RF(raw[2])
        if tag == "asc":
            return raw[2]
        if tag == "neg":
            return self.synth(raw[1], scope)
        a = self.synth(raw[1], scope)
        b = self.synth(raw[2], scope)
        if a is not None and a.is_rf:
            return a
        if b is not None and b.is_rf:
            return b
        return a or b

    def term(self, raw, expected: Sort, scope):
        if expected.is_rf:
            return self.rf(raw, expected.n, scope)
        return self.vg(raw, scope)

    def vg(self, raw, scope) -> VGTerm:
        tag = raw[0]
        if tag == "paren":
            return self.vg(raw[1], scope)
        if tag == "int":
            return VGTerm.lit(raw[1])
        if tag == "var":
            s = self.var_sort(raw[1], scope)
            if not s.is_vg:
                raise SortError(f"{raw[1]!r} has sort {s}, expected a value-group term" + _at(raw[2]))
            return VGTerm.var(Var(raw[1], s))
        if tag == "inf":
            return INF
        if tag == "ord":
            return VGTerm.ord(raw[1])
        if tag == "ordp":
            return VGTerm.var(OrdParam(raw[1]))
        if tag == "asc":
            if not raw[2].is_vg:
                raise SortError(f"ascription to {raw[2]} in a value-group position")
            return self.vg(raw[1], scope)
        if tag == "neg":
            return -self.vg(raw[1], scope)
        if tag == "add":
            return self.vg(raw[1], scope) + self.vg(raw[2], scope)
        if tag == "sub":
            return self.vg(raw[1], scope) - self.vg(raw[2], scope)
        if tag == "mul":
            a, b = self.vg(raw[1], scope), self.vg(raw[2], scope)
            if not (a.is_integer() or b.is_integer()):
                raise SortError(f"nonlinear product ({a})*({b}) is not a Presburger term")
            return a * b
        if tag in ("cross", "res", "acp"):
            raise SortError(f"residue-ring term {tag} used where a value-group term is expected")
        raise FormulaSyntaxError(f"unknown term node {tag}")

    def rf(self, raw, n: int, scope):
        tag = raw[0]
        if tag == "paren":
            return self.rf(raw[1], n, scope)
        if tag == "int":
            return RFLit(raw[1], n)
        if tag == "var":
            s = self.var_sort(raw[1], scope)
            if s != RF(n):
                raise SortError(f"{raw[1]!r} has sort {s}, expected rf[{n}]" + _at(raw[2]))
            return Var(raw[1], s)
        if tag == "acp":
            if raw[1] != n:
                raise SortError(f"ac[{raw[1]}]{{{raw[2]}}} has sort rf[{raw[1]}], expected rf[{n}]")
            return AcParam(raw[1], raw[2])
        if tag == "cross":
            if raw[1] != n:
                raise SortError(f"cross[{raw[1]}] has sort rf[{raw[1]}], expected rf[{n}]" + _at(raw[3]))
            return Cross(n, self.vg(raw[2], scope))
        if tag == "res":
            m, k = raw[1], raw[2]
            if m % k:
                raise SortError(f"res[{m}->{k}] needs {k} | {m}" + _at(raw[4]))
            if k != n:
                raise SortError(f"res[{m}->{k}] has sort rf[{k}], expected rf[{n}]" + _at(raw[4]))
            return Res(m, k, self.rf(raw[3], m, scope))
        if tag == "asc":
            if raw[2] != RF(n):
                raise SortError(f"ascription {raw[2]} where rf[{n}] is expected")
            return self.rf(raw[1], n, scope)
        if tag == "neg":
            return RFOp("-", (self.rf(raw[1], n, scope),), n)
        if tag in ("add", "sub"):
            a = self.rf(raw[1], n, scope)
            b = self.rf(raw[2], n, scope)
            if tag == "sub":
                b = RFOp("-", (b,), n)
            args = (a.args if isinstance(a, RFOp) and a.op == "+" and raw[1][0] in ("add", "sub") else (a,)) + (b,)
            return RFOp("+", args, n)
        if tag == "mul":
            a = self.rf(raw[1], n, scope)
            b = self.rf(raw[2], n, scope)
            args = (a.args if isinstance(a, RFOp) and a.op == "*" and raw[1][0] == "mul" else (a,)) + (b,)
            return RFOp("*", args, n)
        if tag in ("inf", "ord", "ordp"):
            raise SortError(f"value-group term used where rf[{n}] is expected")
        raise FormulaSyntaxError(f"unknown term node {tag}")

    def formula(self, raw, scope):
        tag = raw[0]
        if tag == "const":
            return F.Const(raw[1])
        if tag == "vars":
            return self.formula(raw[2], scope)
        if tag == "rel":
            op, a, b = raw[1], raw[2], raw[3]
            if op in ("=", "!="):
                sa, sb = self.synth(a, scope), self.synth(b, scope)
                rf = sa if sa is not None and sa.is_rf else sb if sb is not None and sb.is_rf else None
                if rf is not None:
                    if sa is not None and sb is not None and sa != sb:
                        raise SortError(f"equation between {sa} and {sb}" + _at(raw[4]))
                    atom = F.RFEq(self.rf(a, rf.n, scope), self.rf(b, rf.n, scope))
                else:
                    atom = F.Cmp("=", self.vg(a, scope), self.vg(b, scope))
                return F.Not(atom) if op == "!=" else atom
            ta, tb = self.vg(a, scope), self.vg(b, scope)
            if op in ("<", "<="):
                return F.Cmp(op, ta, tb)
            return F.Cmp("<" if op == ">" else "<=", tb, ta)
        if tag == "cong":
            return F.Cong(raw[1], self.vg(raw[2], scope), self.vg(raw[3], scope))
        if tag == "amem":
            return F.AMem(raw[1], self.rf(raw[2], raw[1], scope))
        if tag == "pred":
            args = []
            for a in raw[2]:
                s = self.synth(a, scope)
                if s is None or not s.is_rf:
                    raise SortError(f"predicate Phi.{raw[1]} argument must be a residue-ring term")
                args.append(self.rf(a, s.n, scope))
            return F.Pred(raw[1], tuple(args))
        if tag == "not":
            return F.Not(self.formula(raw[1], scope))
        if tag == "and":
            return F.And(tuple(self.formula(a, scope) for a in raw[1]))
        if tag == "or":
            return F.Or(tuple(self.formula(a, scope) for a in raw[1]))
        if tag == "imp":
            return F.Implies(self.formula(raw[1], scope), self.formula(raw[2], scope))
        if tag in ("ex", "all"):
            inner = dict(scope)
            inner[raw[1]] = raw[2]
            v = Var(raw[1], raw[2])
            body = self.formula(raw[3], inner)
            return F.Exists(v, body) if tag == "ex" else F.Forall(v, body)
        raise FormulaSyntaxError(f"unknown formula node {tag}")


def parse_formula(text: str, context: Optional[dict] = None) -> F.Formula:
    """Parse DSL text; context maps free variable names to sorts."""
    raw = _Parser(text).parse()
    known = {}
    for k, v in (context or {}).items():
        known[k] = parse_sort(v) if isinstance(v, str) else v
    inf = _Infer(known)
    _infer_formula(raw, {}, inf)
    return _Elab(inf).formula(raw, {})


def parse_term(text: str, sort: Sort = VG, context: Optional[dict] = None):
    """Parse a single term of the given sort."""
    p = _Parser(text)
    raw = p.term()
    if p.peek().kind != "eof":
        p.fail(f"unexpected {p.peek().text!r}")
    known = {k: (parse_sort(v) if isinstance(v, str) else v) for k, v in (context or {}).items()}
    inf = _Infer(known)
    _infer_term(raw, sort, {}, inf)
    return _Elab(inf).term(raw, sort, {})
