"""Counting roots of integer polynomials modulo prime powers.

Solutions mod p^(j+1) are searched only above solutions mod p^j: each
surviving residue tuple x is refined to x + p^j·t for t ∈ [0, p)^d.  The
tree is walked level by level with numpy, in chunks.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np
import sympy

from ..errors import BudgetExceeded, FormulaSyntaxError

DEFAULT_BUDGET = 50_000_000
_CHUNK = 1 << 20
_INT64_SAFE = 3_000_000_000  # moduli above this use Python integers


@dataclass(frozen=True)
class IntPoly:
    """Sparse integer polynomial: {exponent tuple: coefficient}."""

    vars: tuple
    terms: tuple  # sorted ((exponents, coeff), ...)

    @staticmethod
    def make(vars: Sequence[str], coeffs: Mapping[tuple, int]) -> "IntPoly":
        items = sorted((tuple(e), int(c)) for e, c in coeffs.items() if c)
        return IntPoly(tuple(vars), tuple(items))

    @staticmethod
    def parse(text: str, vars: Optional[Sequence[str]] = None) -> "IntPoly":
        """Parse 'x^2 - y^3' style input (sympy syntax, ^ allowed)."""
        try:
            expr = sympy.sympify(text.replace("^", "**"), evaluate=True)
        except (sympy.SympifyError, SyntaxError, TypeError) as e:
            raise FormulaSyntaxError(f"cannot parse polynomial {text!r}: {e}") from None
        syms = sorted(expr.free_symbols, key=lambda s: s.name)
        if vars is not None:
            names = list(vars)
            extra = {s.name for s in syms} - set(names)
            if extra:
                raise FormulaSyntaxError(f"polynomial uses undeclared variables {sorted(extra)}")
            syms = [sympy.Symbol(v) for v in names]
        if not syms:
            syms = [sympy.Symbol("x")]
        try:
            poly = sympy.Poly(expr, *syms)
        except sympy.PolynomialError as e:
            raise FormulaSyntaxError(f"not a polynomial: {text!r} ({e})") from None
        coeffs = {}
        for mon, c in poly.terms():
            if not c.is_integer:
                raise FormulaSyntaxError(f"non-integer coefficient {c} in {text!r}")
            coeffs[tuple(mon)] = int(c)
        return IntPoly.make([s.name for s in syms], coeffs)

    @staticmethod
    def from_json(d) -> "IntPoly":
        return IntPoly.make(d["vars"], {tuple(t["exp"]): int(t["coeff"]) for t in d["terms"]})

    def to_json(self):
        return {"vars": list(self.vars), "terms": [{"exp": list(e), "coeff": c} for e, c in self.terms]}

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def __call__(self, *xs) -> int:
        return sum(c * _prod(x**e for x, e in zip(xs, exps)) for exps, c in self.terms)

    def eval_mod(self, X: np.ndarray, M: int) -> np.ndarray:
        """f(X[:, 0], ..., X[:, d−1]) mod M for a (k, d) array of residues."""
        obj = M > _INT64_SAFE
        if obj:
            X = X.astype(object)
        out = np.zeros(X.shape[0], dtype=object if obj else np.int64)
        for exps, c in self.terms:
            t = np.full(X.shape[0], c % M, dtype=object if obj else np.int64)
            for i, e in enumerate(exps):
                for _ in range(e):
                    t = (t * X[:, i]) % M
            out = (out + t) % M
        return out

    def __str__(self) -> str:
        syms = [sympy.Symbol(v) for v in self.vars]
        expr = sum(c * _prod(s**e for s, e in zip(syms, exps)) for exps, c in self.terms)
        return str(expr).replace("**", "^")


def _prod(it):
    out = 1
    for x in it:
        out *= x
    return out


def as_poly(f: Union[str, IntPoly]) -> IntPoly:
    return f if isinstance(f, IntPoly) else IntPoly.parse(f)


def count_roots_levels(f: Union[str, IntPoly], p: int, m: int, budget: int = DEFAULT_BUDGET) -> list:
    """[N_0, N_1, ..., N_m] with N_j = #{x mod p^j : f(x) ≡ 0 mod p^j}."""
    f = as_poly(f)
    d = f.nvars
    if m < 0:
        raise ValueError("depth must be non-negative")
    digits = np.array(list(itertools.product(range(p), repeat=d)), dtype=np.int64).reshape(-1, d)
    sols = np.zeros((1, d), dtype=np.int64)
    counts = [1]
    spent = 0
    for j in range(m):
        step = p**j
        M = p ** (j + 1)
        n_cand = len(sols) * len(digits)
        spent += n_cand
        if spent > budget:
            raise BudgetExceeded(f"root tree for {f} mod {p}^{m} exceeds {budget} nodes (at level {j + 1})")
        last = j == m - 1
        found = []
        total = 0
        rows = max(1, _CHUNK // len(digits))
        for start in range(0, len(sols), rows):
            block = sols[start : start + rows]
            cand = (block[:, None, :] + step * digits[None, :, :]).reshape(-1, d)
            if M > _INT64_SAFE:
                cand = cand.astype(object)
            mask = f.eval_mod(cand, M) == 0
            total += int(np.count_nonzero(mask))
            if not last:
                found.append(cand[mask])
        counts.append(total)
        if not last:
            sols = np.concatenate(found) if found else np.zeros((0, d), dtype=np.int64)
    return counts


def count_roots_mod(f: Union[str, IntPoly], p: int, m: int, budget: int = DEFAULT_BUDGET) -> int:
    """N_m = #{x mod p^m : f(x) ≡ 0 mod p^m}."""
    if m < 1:
        raise ValueError("m must be at least 1")
    return count_roots_levels(f, p, m, budget)[-1]


def count_roots_brute(f: Union[str, IntPoly], p: int, m: int) -> int:
    """Direct enumeration of (ℤ/p^m)^d; a reference for small cases."""
    f = as_poly(f)
    M = p**m
    return sum(1 for x in itertools.product(range(M), repeat=f.nvars) if f(*x) % M == 0)
