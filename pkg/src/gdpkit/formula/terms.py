"""Value-group and residue-ring terms.

Value-group terms are kept in a normalized linear form: integer
coefficients on variables, opaque ``ord`` parameters and the constants
``ord(p)`` for primes p, plus an integer constant.  The symbolic constant
``ord(n)`` is expanded along the factorization of n, so ``ord(12)`` is
``2*ord(2) + ord(3)`` and ``ord(1)`` is 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from ..errors import SortError
from .arith import factorize
from .sorts import RF, VG, VGINF, Sort


@dataclass(frozen=True, order=True)
class Var:
    name: str
    sort: Sort

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class OrdParam:
    """Opaque value ``ord p(x)`` of a valued-field expression, sort VG∞."""

    label: str

    @property
    def sort(self) -> Sort:
        return VGINF

    def __str__(self) -> str:
        return f"ord{{{self.label}}}"


@dataclass(frozen=True, order=True)
class OrdConst:
    """The symbolic constant ord(p) for a prime p."""

    prime: int

    @property
    def sort(self) -> Sort:
        return VG

    def __str__(self) -> str:
        return f"ord({self.prime})"


Key = Union[Var, OrdParam, OrdConst]


def _key_rank(k: Key):
    if isinstance(k, Var):
        return (0, k.name, str(k.sort))
    if isinstance(k, OrdParam):
        return (1, k.label, "")
    return (2, "", f"{k.prime:012d}")


@dataclass(frozen=True)
class VGTerm:
    coeffs: tuple = ()
    const: int = 0
    inf: bool = False

    # construction -------------------------------------------------------
    @staticmethod
    def make(coeffs: dict, const: int = 0) -> "VGTerm":
        items = sorted(((k, int(c)) for k, c in coeffs.items() if c), key=lambda kc: _key_rank(kc[0]))
        return VGTerm(tuple(items), int(const), False)

    @staticmethod
    def lit(c: int) -> "VGTerm":
        return VGTerm((), int(c), False)

    @staticmethod
    def var(v: Union[Var, OrdParam]) -> "VGTerm":
        if not v.sort.is_vg:
            raise SortError(f"{v} has sort {v.sort}, expected a value-group sort")
        return VGTerm(((v, 1),), 0, False)

    @staticmethod
    def ord(n: int) -> "VGTerm":
        if n == 0:
            raise SortError("ord(0) is not a constant symbol")
        return VGTerm.make({OrdConst(p): e for p, e in factorize(n)})

    # queries ------------------------------------------------------------
    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def coeff(self, k: Key) -> int:
        for kk, c in self.coeffs:
            if kk == k:
                return c
        return 0

    @property
    def sort(self) -> Sort:
        if self.inf or any(k.sort == VGINF for k, _ in self.coeffs):
            return VGINF
        return VG

    def variables(self) -> set:
        return {k for k, _ in self.coeffs if isinstance(k, Var)}

    def params(self) -> set:
        return {k for k, _ in self.coeffs if isinstance(k, OrdParam)}

    def ord_primes(self) -> set:
        return {k.prime for k, _ in self.coeffs if isinstance(k, OrdConst)}

    def is_constant(self) -> bool:
        """No variables or opaque parameters (ord constants allowed)."""
        return not self.inf and all(isinstance(k, OrdConst) for k, _ in self.coeffs)

    def is_integer(self) -> bool:
        return not self.inf and not self.coeffs

    # arithmetic ---------------------------------------------------------
    def __add__(self, other: "VGTerm") -> "VGTerm":
        other = as_vg(other)
        if self.inf or other.inf:
            return INF
        d = self.as_dict()
        for k, c in other.coeffs:
            d[k] = d.get(k, 0) + c
        return VGTerm.make(d, self.const + other.const)

    __radd__ = __add__

    def __neg__(self) -> "VGTerm":
        if self.inf:
            raise SortError("cannot negate +inf")
        return VGTerm(tuple((k, -c) for k, c in self.coeffs), -self.const, False)

    def __sub__(self, other: "VGTerm") -> "VGTerm":
        return self + (-as_vg(other))

    def __rsub__(self, other) -> "VGTerm":
        return as_vg(other) + (-self)

    def scale(self, k: int) -> "VGTerm":
        if not isinstance(k, int):
            raise SortError("value-group terms only admit integer scalars")
        if self.inf:
            if k > 0:
                return INF
            if k == 0:
                return VGTerm.lit(0)
            raise SortError("cannot negate +inf")
        if k == 0:
            return VGTerm.lit(0)
        return VGTerm(tuple((kk, c * k) for kk, c in self.coeffs), self.const * k, False)

    def __mul__(self, k):
        if isinstance(k, VGTerm):
            if k.is_integer():
                return self.scale(k.const)
            if self.is_integer():
                return k.scale(self.const)
            raise SortError(f"nonlinear product {self} * {k}")
        return self.scale(k)

    __rmul__ = __mul__

    def drop(self, k: Key) -> "VGTerm":
        return VGTerm.make({kk: c for kk, c in self.coeffs if kk != k}, self.const)

    def substitute(self, k: Key, t: "VGTerm") -> "VGTerm":
        c = self.coeff(k)
        if not c:
            return self
        return self.drop(k) + t.scale(c)

    def __str__(self) -> str:
        from .printer import vg_str

        return vg_str(self)


INF = VGTerm((), 0, True)


def as_vg(x) -> VGTerm:
    if isinstance(x, VGTerm):
        return x
    if isinstance(x, bool):
        raise SortError("boolean is not a value-group term")
    if isinstance(x, int):
        return VGTerm.lit(x)
    if isinstance(x, (Var, OrdParam)):
        return VGTerm.var(x)
    raise SortError(f"not a value-group term: {x!r}")


# residue-ring terms ---------------------------------------------------------


@dataclass(frozen=True, order=True)
class AcParam:
    """Opaque value ``ac_n p(x)`` of a valued-field expression, sort RF(n)."""

    n: int
    label: str

    @property
    def sort(self) -> Sort:
        return RF(self.n)

    def __str__(self) -> str:
        return f"ac[{self.n}]{{{self.label}}}"


@dataclass(frozen=True)
class RFLit:
    value: int
    n: int

    @property
    def sort(self) -> Sort:
        return RF(self.n)


@dataclass(frozen=True)
class RFOp:
    """Ring operation: '+' and '*' are n-ary, '-' is unary negation."""

    op: str
    args: tuple
    n: int

    def __post_init__(self):
        if self.op not in ("+", "*", "-"):
            raise SortError(f"unknown ring operation {self.op!r}")
        if self.op == "-" and len(self.args) != 1:
            raise SortError("negation is unary")
        for a in self.args:
            if rf_sort(a) != RF(self.n):
                raise SortError(f"operand {a} has sort {rf_sort(a)}, expected rf[{self.n}]")

    @property
    def sort(self) -> Sort:
        return RF(self.n)


@dataclass(frozen=True)
class Res:
    m: int
    n: int
    arg: object

    def __post_init__(self):
        if self.m % self.n:
            raise SortError(f"res[{self.m}->{self.n}] needs {self.n} | {self.m}")
        if rf_sort(self.arg) != RF(self.m):
            raise SortError(f"res[{self.m}->{self.n}] applied to {self.arg} of sort {rf_sort(self.arg)}")

    @property
    def sort(self) -> Sort:
        return RF(self.n)


@dataclass(frozen=True)
class Cross:
    n: int
    arg: VGTerm

    def __post_init__(self):
        if self.n < 1:
            raise SortError("cross[n] needs n >= 1")
        if not isinstance(self.arg, VGTerm):
            raise SortError(f"cross[{self.n}] expects a value-group term, got {self.arg!r}")

    @property
    def sort(self) -> Sort:
        return RF(self.n)


RFTerm = Union[Var, AcParam, RFLit, RFOp, Res, Cross]


def rf_sort(t) -> Sort:
    if isinstance(t, (Var, AcParam, RFLit, RFOp, Res, Cross)):
        s = t.sort
        if not s.is_rf:
            raise SortError(f"{t} has sort {s}, expected a residue-ring sort")
        return s
    raise SortError(f"not a residue-ring term: {t!r}")


def rf_add(*args) -> RFTerm:
    n = rf_sort(args[0]).n
    return RFOp("+", tuple(args), n)


def rf_mul(*args) -> RFTerm:
    n = rf_sort(args[0]).n
    return RFOp("*", tuple(args), n)


def rf_neg(a) -> RFTerm:
    return RFOp("-", (a,), rf_sort(a).n)


def rf_sub(a, b) -> RFTerm:
    return rf_add(a, rf_neg(b))


def rf_pow(a, k: int) -> RFTerm:
    if k < 0:
        raise SortError("negative powers in residue rings")
    if k == 0:
        return RFLit(1, rf_sort(a).n)
    if k == 1:
        return a
    return RFOp("*", tuple([a] * k), rf_sort(a).n)


def rf_children(t) -> tuple:
    if isinstance(t, RFOp):
        return t.args
    if isinstance(t, Res):
        return (t.arg,)
    return ()


def rf_map(t, f_rf, f_vg):
    """Rebuild an RF term bottom-up, applying f_rf to RF leaves and f_vg to cross arguments."""
    if isinstance(t, RFOp):
        return RFOp(t.op, tuple(rf_map(a, f_rf, f_vg) for a in t.args), t.n)
    if isinstance(t, Res):
        return Res(t.m, t.n, rf_map(t.arg, f_rf, f_vg))
    if isinstance(t, Cross):
        return Cross(t.n, f_vg(t.arg))
    return f_rf(t)


def rf_crosses(t) -> list:
    if isinstance(t, Cross):
        return [t]
    out = []
    for c in rf_children(t):
        out.extend(rf_crosses(c))
    return out


def rf_leaves(t) -> Iterable:
    if isinstance(t, (Var, AcParam)):
        yield t
    for c in rf_children(t):
        yield from rf_leaves(c)
