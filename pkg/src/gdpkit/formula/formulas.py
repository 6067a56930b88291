"""Formula nodes and smart constructors."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import SortError
from .sorts import Sort
from .terms import VGTerm, Var, as_vg, rf_sort


class Formula:
    """Marker base class for formula nodes."""

    def __and__(self, other):
        return conj(self, other)

    def __or__(self, other):
        return disj(self, other)

    def __invert__(self):
        return neg(self)

    def __str__(self) -> str:
        from .printer import to_text

        return to_text(self)


@dataclass(frozen=True, eq=True)
class Const(Formula):
    value: bool

    __str__ = Formula.__str__


TRUE = Const(True)
FALSE = Const(False)

CMP_OPS = ("=", "<", "<=")


@dataclass(frozen=True, eq=True)
class Cmp(Formula):
    op: str
    lhs: VGTerm
    rhs: VGTerm

    def __post_init__(self):
        if self.op not in CMP_OPS:
            raise SortError(f"unknown comparison {self.op!r}")
        object.__setattr__(self, "lhs", as_vg(self.lhs))
        object.__setattr__(self, "rhs", as_vg(self.rhs))

    __str__ = Formula.__str__


@dataclass(frozen=True, eq=True)
class Cong(Formula):
    """lhs ≡ rhs mod d."""

    d: int
    lhs: VGTerm
    rhs: VGTerm

    def __post_init__(self):
        if self.d < 2:
            raise SortError(f"congruence modulus must be >= 2, got {self.d}")
        object.__setattr__(self, "lhs", as_vg(self.lhs))
        object.__setattr__(self, "rhs", as_vg(self.rhs))

    __str__ = Formula.__str__


@dataclass(frozen=True, eq=True)
class RFEq(Formula):
    lhs: object
    rhs: object

    def __post_init__(self):
        a, b = rf_sort(self.lhs), rf_sort(self.rhs)
        if a != b:
            raise SortError(f"equation between {a} and {b}: {self.lhs} = {self.rhs}")

    __str__ = Formula.__str__


@dataclass(frozen=True, eq=True)
class AMem(Formula):
    n: int
    arg: object

    def __post_init__(self):
        s = rf_sort(self.arg)
        if s.n != self.n:
            raise SortError(f"A[{self.n}] applied to a term of sort {s}")

    __str__ = Formula.__str__


@dataclass(frozen=True, eq=True)
class Pred(Formula):
    """Uninterpreted residue-ring predicate; models supply the extension."""

    name: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        for a in self.args:
            rf_sort(a)

    __str__ = Formula.__str__


@dataclass(frozen=True, eq=True)
class Not(Formula):
    arg: Formula
    __str__ = Formula.__str__


@dataclass(frozen=True, eq=True)
class And(Formula):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    __str__ = Formula.__str__


@dataclass(frozen=True, eq=True)
class Or(Formula):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    __str__ = Formula.__str__


@dataclass(frozen=True, eq=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula
    __str__ = Formula.__str__


@dataclass(frozen=True, eq=True)
class Exists(Formula):
    var: Var
    body: Formula

    def __post_init__(self):
        if not isinstance(self.var, Var):
            raise SortError("quantifiers bind variables only")
        if self.var.sort.kind == "bool":
            raise SortError("cannot quantify over Bool")

    __str__ = Formula.__str__


@dataclass(frozen=True, eq=True)
class Forall(Formula):
    var: Var
    body: Formula

    def __post_init__(self):
        if not isinstance(self.var, Var):
            raise SortError("quantifiers bind variables only")
        if self.var.sort.kind == "bool":
            raise SortError("cannot quantify over Bool")

    __str__ = Formula.__str__


ATOMS = (Cmp, Cong, RFEq, AMem, Pred)


def is_atom(f) -> bool:
    return isinstance(f, ATOMS)


def is_literal(f) -> bool:
    return is_atom(f) or isinstance(f, Const) or (isinstance(f, Not) and is_atom(f.arg))


# smart constructors --------------------------------------------------------


def conj(*fs) -> Formula:
    out = []
    seen = set()
    for f in fs:
        parts = f.args if isinstance(f, And) else (f,)
        for g in parts:
            if g == TRUE:
                continue
            if g == FALSE:
                return FALSE
            if g not in seen:
                seen.add(g)
                out.append(g)
    if not out:
        return TRUE
    if len(out) == 1:
        return out[0]
    return And(tuple(out))


def disj(*fs) -> Formula:
    out = []
    seen = set()
    for f in fs:
        parts = f.args if isinstance(f, Or) else (f,)
        for g in parts:
            if g == FALSE:
                continue
            if g == TRUE:
                return TRUE
            if g not in seen:
                seen.add(g)
                out.append(g)
    if not out:
        return FALSE
    if len(out) == 1:
        return out[0]
    return Or(tuple(out))


def neg(f: Formula) -> Formula:
    if isinstance(f, Const):
        return Const(not f.value)
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def exists(vs, body: Formula) -> Formula:
    if isinstance(vs, Var):
        vs = [vs]
    for v in reversed(list(vs)):
        body = Exists(v, body)
    return body


def forall(vs, body: Formula) -> Formula:
    if isinstance(vs, Var):
        vs = [vs]
    for v in reversed(list(vs)):
        body = Forall(v, body)
    return body


# comparison helpers
def eq(a, b) -> Formula:
    return Cmp("=", as_vg(a), as_vg(b))


def lt(a, b) -> Formula:
    return Cmp("<", as_vg(a), as_vg(b))


def le(a, b) -> Formula:
    return Cmp("<=", as_vg(a), as_vg(b))


def ge(a, b) -> Formula:
    return Cmp("<=", as_vg(b), as_vg(a))


def gt(a, b) -> Formula:
    return Cmp("<", as_vg(b), as_vg(a))


def cong(d: int, a, b=0) -> Formula:
    return Cong(d, as_vg(a), as_vg(b))


def vg_var(name: str, inf: bool = False) -> Var:
    from .sorts import VG, VGINF

    return Var(name, VGINF if inf else VG)


def rf_var(name: str, n: int) -> Var:
    from .sorts import RF

    return Var(name, RF(n))


def sort_of_var(v: Var) -> Sort:
    return v.sort
