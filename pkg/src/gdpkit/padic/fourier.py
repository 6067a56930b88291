"""Step functions on p-adic balls and their exact Fourier transforms.

A StepFunction of radius a and level m is supported on (p^(−a) O)^d and
constant on cosets of (p^m O)^d, with a + m ≥ 0.  The coset with index
t ∈ [0, p^(a+m))^d is t·p^(−a) + (p^m O)^d.

For ψ trivial on M = pO and non-trivial on O,

    F(f)(z) = ∫ f(y) ψ(y·z) dy = p^(−md) Σ_t f_t ψ(p^(−a) t·z)

vanishes unless z ∈ (p^(1−m) O)^d and depends on z only modulo p^(a+1),
so F(f) has radius m − 1 and level a + 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..formula.arith import vp
from .character import Character
from .cyclotomic import Cyclo


def _as_cyclo(v) -> Cyclo:
    return v if isinstance(v, Cyclo) else Cyclo.rational(v)


@dataclass(frozen=True)
class StepFunction:
    p: int
    d: int
    radius: int
    level: int
    values: dict = field(default_factory=dict)  # index tuple -> value; missing means 0

    def __post_init__(self):
        if self.radius + self.level < 0:
            raise ValueError("level must be at least −radius")
        clean = {tuple(k): _as_cyclo(v) for k, v in self.values.items() if not _as_cyclo(v).is_zero()}
        object.__setattr__(self, "values", clean)

    @staticmethod
    def indicator_ball(p: int, d: int = 1, r: int = 0) -> "StepFunction":
        """1 on (p^r O)^d."""
        return StepFunction(p, d, -r, r, {(0,) * d: 1})

    @staticmethod
    def zero(p: int, d: int = 1) -> "StepFunction":
        return StepFunction(p, d, 0, 0, {})

    @property
    def cells_per_axis(self) -> int:
        return self.p ** (self.radius + self.level)

    def __call__(self, x) -> Cyclo:
        """Value at a point of Q_p^d given by rationals."""
        if self.d == 1 and not isinstance(x, (tuple, list)):
            x = (x,)
        idx = []
        for xi in x:
            xi = Fraction(xi)
            if xi != 0 and _vq(xi, self.p) < -self.radius:
                return Cyclo.rational(0)
            t = xi * Fraction(self.p) ** self.radius  # in O
            mod = self.cells_per_axis
            idx.append(t.numerator * pow(t.denominator, -1, mod) % mod if mod > 1 else 0)
        return self.values.get(tuple(idx), Cyclo.rational(0))

    def refine(self, radius: int, level: int) -> "StepFunction":
        """The same function described with a larger radius and finer level."""
        if radius < self.radius or level < self.level:
            raise ValueError("can only refine to larger radius and level")
        out = {}
        p = self.p
        for idx in itertools.product(range(p ** (radius + level)), repeat=self.d):
            x = tuple(Fraction(i) / Fraction(p) ** radius for i in idx)
            v = self(x)
            if not v.is_zero():
                out[idx] = v
        return StepFunction(p, self.d, radius, level, out)

    def integral(self) -> Cyclo:
        vol = Fraction(1, self.p ** (self.level * self.d)) if self.level >= 0 else Fraction(self.p ** (-self.level * self.d))
        total = Cyclo.rational(0)
        for v in self.values.values():
            total = total + v
        return total * vol

    def scale(self, c) -> "StepFunction":
        return StepFunction(self.p, self.d, self.radius, self.level, {k: v * c for k, v in self.values.items()})

    def equals(self, other: "StepFunction") -> bool:
        r = max(self.radius, other.radius)
        m = max(self.level, other.level)
        a, b = self.refine(r, m), other.refine(r, m)
        keys = set(a.values) | set(b.values)
        zero = Cyclo.rational(0)
        return all(a.values.get(k, zero) == b.values.get(k, zero) for k in keys)

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self.p == other.p and self.d == other.d and self.equals(other)

    def __hash__(self):
        return hash((self.p, self.d))


def _vq(x: Fraction, p: int) -> int:
    return vp(abs(x.numerator), p) - vp(x.denominator, p)


def fourier_step(f: StepFunction, psi: Optional[Character] = None) -> StepFunction:
    """F(f)(z) = ∫ f(y) ψ(y·z) |dy|, exactly."""
    p, d = f.p, f.d
    psi = psi or Character(p)
    shift = psi.conductor_exponent()
    # ψ trivial on p^shift O: output radius level−shift, level radius+shift
    a_out = f.level - shift
    m_out = f.radius + shift
    vol = Fraction(1, p ** (f.level * d)) if f.level >= 0 else Fraction(p ** (-f.level * d))
    out = {}
    if f.values:
        for s in itertools.product(range(p ** (a_out + m_out)), repeat=d):
            z = tuple(Fraction(si) / Fraction(p) ** a_out for si in s)
            acc = Cyclo.rational(0)
            for t, v in f.values.items():
                y = tuple(Fraction(ti) / Fraction(p) ** f.radius for ti in t)
                acc = acc + v * psi(sum(yi * zi for yi, zi in zip(y, z)))
            if not acc.is_zero():
                out[s] = acc * vol
    return StepFunction(p, d, a_out, m_out, out)
