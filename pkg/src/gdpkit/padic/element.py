"""Elements of Q_p known up to an absolute precision, and residue rings."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from ..errors import InsufficientPrecision
from ..formula.arith import vp


def _vq(x: Fraction, p: int) -> Optional[int]:
    """p-adic valuation of a rational; None for 0."""
    if x == 0:
        return None
    return vp(abs(x.numerator), p) - vp(x.denominator, p)


@dataclass(frozen=True)
class PadicElement:
    """x ∈ a + p^N·Z_p, with N = None meaning x = a exactly.

    a is a rational whose denominator is a power of p.  The valuation is
    determined when a ≢ 0 mod p^N; the unit part is then known modulo
    p^(N − ord x).
    """

    p: int
    a: Fraction
    N: Optional[int] = None

    def __post_init__(self):
        a = Fraction(self.a)
        if self.N is not None and a != 0:
            # canonical representative: a = num / p^j with 0 <= num < p^(N+j)
            if _vq(a, self.p) >= self.N:
                a = Fraction(0)
            else:
                j = vp(a.denominator, self.p)
                if a.denominator != self.p**j:
                    mod = self.p ** (self.N + j)
                    unit_den = a.denominator // self.p**j
                    num = a.numerator * pow(unit_den, -1, mod)
                    a = Fraction(num % mod, self.p**j)
                else:
                    a = Fraction(a.numerator % self.p ** (self.N + j), self.p**j)
        object.__setattr__(self, "a", a)

    # construction -------------------------------------------------------
    @staticmethod
    def exact(p: int, x: Union[int, Fraction]) -> "PadicElement":
        x = Fraction(x)
        if x.denominator != 1 and vp(x.denominator, p) == 0:
            raise ValueError("only rationals with p-power denominators are represented exactly")
        return PadicElement(p, x, None)

    @staticmethod
    def approx(p: int, x: Union[int, Fraction], N: int) -> "PadicElement":
        """x + O(p^N)."""
        return PadicElement(p, Fraction(x), N)

    @staticmethod
    def big_o(p: int, N: int) -> "PadicElement":
        return PadicElement(p, Fraction(0), N)

    @staticmethod
    def from_parts(p: int, v: int, u: int, m: int) -> "PadicElement":
        """p^v · u with the unit u known modulo p^m."""
        if u % p == 0:
            raise ValueError("unit part must be prime to p")
        return PadicElement(p, Fraction(u % p**m) * Fraction(p) ** v, v + m)

    # queries ------------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.N is None

    def ord_known(self) -> bool:
        return self.N is None or (self.a != 0 and _vq(self.a, self.p) < self.N)

    def ord(self):
        """Valuation (math.inf for exact zero)."""
        if self.a == 0:
            if self.N is None:
                return float("inf")
            raise InsufficientPrecision(f"ord of O({self.p}^{self.N}) is undetermined")
        v = _vq(self.a, self.p)
        if self.N is not None and v >= self.N:
            raise InsufficientPrecision("valuation undetermined at this precision")
        return v

    def ord_lower_bound(self) -> int:
        if self.ord_known():
            o = self.ord()
            return o
        return self.N

    def rel_prec(self) -> Optional[int]:
        """Number of known p-adic digits of the unit part (None = exact)."""
        if self.N is None:
            return None
        return self.N - self.ord()

    def unit(self, k: int) -> int:
        """Unit part modulo p^k."""
        v = self.ord()
        if v == float("inf"):
            return 0
        rp = self.rel_prec()
        if rp is not None and rp < k:
            raise InsufficientPrecision(f"unit part known mod {self.p}^{rp}, need {k} digits")
        u = self.a / Fraction(self.p) ** v
        mod = self.p**k
        return u.numerator * pow(u.denominator, -1, mod) % mod

    def ac(self, n: int) -> "ResidueRingElem":
        """Angular component ac_n in RF_n = Z/p^(v_p(n)+1)."""
        k = vp(n, self.p) + 1
        if self.a == 0 and self.N is None:
            return ResidueRingElem(self.p, n, 0)
        return ResidueRingElem(self.p, n, self.unit(k))

    def res(self, n: int) -> "ResidueRingElem":
        """res_n: O_K → O_K/(n·M_K); elements outside O_K go to 0."""
        k = vp(n, self.p) + 1
        if self.a == 0:
            if self.N is None or self.N >= k:
                return ResidueRingElem(self.p, n, 0)
            raise InsufficientPrecision("residue undetermined")
        v = self.ord_lower_bound()
        if self.ord_known() and v < 0:
            return ResidueRingElem(self.p, n, 0)
        if self.N is not None and self.N < k:
            raise InsufficientPrecision(f"need precision {self.p}^{k}")
        x = self.a
        mod = self.p**k
        return ResidueRingElem(self.p, n, x.numerator * pow(x.denominator, -1, mod) % mod)

    # arithmetic ---------------------------------------------------------
    def _abs_prec_mul(self, other: "PadicElement") -> Optional[int]:
        if self.N is None and other.N is None:
            return None
        cands = []
        if self.N is not None:
            cands.append(self.N + other.ord_lower_bound() if other.a != 0 or other.N is not None else None)
        if other.N is not None:
            cands.append(other.N + self.ord_lower_bound() if self.a != 0 or self.N is not None else None)
        cands = [c for c in cands if c is not None]
        return min(cands) if cands else None

    def __add__(self, other):
        other = _coerce(other, self.p)
        N = _min_prec(self.N, other.N)
        return PadicElement(self.p, self.a + other.a, N)

    __radd__ = __add__

    def __neg__(self):
        return PadicElement(self.p, -self.a, self.N)

    def __sub__(self, other):
        return self + (-_coerce(other, self.p))

    def __rsub__(self, other):
        return _coerce(other, self.p) - self

    def __mul__(self, other):
        other = _coerce(other, self.p)
        if (self.a == 0 and self.N is None) or (other.a == 0 and other.N is None):
            return PadicElement(self.p, Fraction(0), None)
        return PadicElement(self.p, self.a * other.a, self._abs_prec_mul(other))

    __rmul__ = __mul__

    def __str__(self) -> str:
        s = str(self.a)
        return s if self.N is None else f"{s} + O({self.p}^{self.N})"


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _coerce(x, p) -> PadicElement:
    if isinstance(x, PadicElement):
        if x.p != p:
            raise ValueError("mixing different primes")
        return x
    return PadicElement.exact(p, x)


@dataclass(frozen=True)
class ResidueRingElem:
    """An element of RF_n = Z/p^(v_p(n)+1) (tagged with n)."""

    p: int
    n: int
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus)

    @property
    def k(self) -> int:
        return vp(self.n, self.p) + 1

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def _same(self, other):
        if isinstance(other, int):
            return ResidueRingElem(self.p, self.n, other)
        if other.p != self.p or other.modulus != self.modulus:
            raise ValueError("residue rings differ")
        return other

    def __add__(self, other):
        return ResidueRingElem(self.p, self.n, self.value + self._same(other).value)

    __radd__ = __add__

    def __sub__(self, other):
        return ResidueRingElem(self.p, self.n, self.value - self._same(other).value)

    def __neg__(self):
        return ResidueRingElem(self.p, self.n, -self.value)

    def __mul__(self, other):
        return ResidueRingElem(self.p, self.n, self.value * self._same(other).value)

    __rmul__ = __mul__

    def res(self, m: int) -> "ResidueRingElem":
        """Reduction RF_n → RF_m for m | n."""
        if self.n % m:
            raise ValueError(f"res needs {m} | {self.n}")
        return ResidueRingElem(self.p, m, self.value)

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return f"{self.value} mod {self.modulus}"


def rf_modulus(p: int, n: int) -> int:
    return p ** (vp(n, p) + 1)


def cross(p: int, n: int, gamma) -> int:
    """cross_n(γ): residue of an element of valuation γ with ac_n = 1."""
    k = vp(n, p) + 1
    if gamma == float("inf") or gamma < 0 or gamma >= k:
        return 0
    return p**gamma


def A_set(p: int, n: int) -> list:
    """A_n = res_n of the elements with ac_n = 1, as residues mod p^k."""
    k = vp(n, p) + 1
    return sorted({0} | {p**g for g in range(k)})


def angular_component(x: PadicElement, n: int) -> ResidueRingElem:
    return x.ac(n)
