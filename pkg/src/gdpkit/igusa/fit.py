"""Fitting Igusa zeta functions to root counts.

From counts to zeta coefficients.  Let d be the number of variables and
c_m = N_m p^(−dm).  A point x ∈ Z_p^d satisfies ord f(x) ≥ m exactly when
its class mod p^m is a root mod p^m; each class is a ball of volume
p^(−dm), so c_m = μ{ord f ≥ m}.  Hence

    Z(s) = ∫ |f|^s dx = Σ_k μ{ord f = k} t^k = Σ_k (c_k − c_(k+1)) t^k,

with t = p^(−s).  Writing P(T) = Σ_m c_m T^m for the Poincaré series,
P(T) = (1 − T·Z(T)) / (1 − T), since c_m = Σ_(k≥m) z_k and c_0 = 1.  Depth
M gives z_0 .. z_(M−1).  For f = x: c_m = p^(−m), so
z_k = (1 − p^(−1)) p^(−k) and Z = (1 − p^(−1)) / (1 − p^(−1) t).

Fitting.  For a pair set {(a_i, b_i)} with b_i < 0 put
D(t) = Π(1 − p^(a_i) t^(−b_i)) and δ = Σ|b_i|.  The product n = D·z is
computed on 0 .. M−1; the numerator is solved from n_0 .. n_e with e = M − δ − 2
unless a smaller degree bound is given, and the remaining n_(e+1) ..
n_(M−1) (at least δ + 1 of them) are held out and must vanish exactly.
Accepted fits are ranked by δ plus the actual numerator degree, so a pole
free fit whose numerator just copies the data loses to a genuine one.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from ..cfun.aring import _frac, frac_str
from ..cfun.zeta import ZetaRational, clears_with, denominator_certificate
from ..errors import InsufficientDepth, NoFit, NotClearable
from .report import SCHEMA_VERSION, CountReport

Pair = tuple  # (a, b) with b < 0, factor 1 − q^(a + b s)


def zeta_coefficients(poincare: Sequence[Fraction]) -> list:
    """z_k = c_k − c_(k+1) for k < M, from c_0 .. c_M."""
    return [Fraction(poincare[k]) - Fraction(poincare[k + 1]) for k in range(len(poincare) - 1)]


def denominator_poly(pairs: Iterable[Pair], p: int) -> list:
    """Coefficients in t of Π(1 − p^a t^(−b))."""
    out = [Fraction(1)]
    for a, b in pairs:
        k = -int(b)
        fac = Fraction(p) ** int(a)
        new = out + [Fraction(0)] * k
        for j, c in enumerate(out):
            new[j + k] -= fac * c
        out = new
    return out


def _convolve(a: Sequence, b: Sequence, n: int) -> list:
    return [sum(a[i] * b[j - i] for i in range(max(0, j - len(b) + 1), min(j, len(a) - 1) + 1)) for j in range(n)]


def _norm_pairs(pairs) -> tuple:
    return tuple(sorted((int(a), int(b)) for a, b in pairs))


def delta(pairs) -> int:
    return sum(abs(int(b)) for _, b in pairs)


@dataclass(frozen=True)
class PrimeFit:
    p: int
    pairs: tuple
    numerator: tuple  # n_0 .. n_e (coefficients of t^j)
    train: tuple  # indices of z used to solve for the numerator
    held_out: tuple  # indices whose coefficient of D·z must vanish
    accepted: bool

    def zeta(self) -> ZetaRational:
        num = {(Fraction(0), j): c for j, c in enumerate(self.numerator) if c}
        return ZetaRational.make(num, 0, 1, self.pairs, q0=self.p)

    def reproduces(self, report: CountReport) -> bool:
        """Whether the fitted function gives back every N_m of the report."""
        z = self.zeta().series(self.p, report.depth)
        c = [Fraction(1)]
        for k in range(report.depth):
            c.append(c[-1] - z[k])
        return c == report.poincare(self.p)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "pairs": [list(x) for x in self.pairs],
            "numerator": [frac_str(c) for c in self.numerator],
            "train": list(self.train),
            "held_out": list(self.held_out),
            "accepted": self.accepted,
        }

    @staticmethod
    def from_json(d: dict) -> "PrimeFit":
        return PrimeFit(
            int(d["p"]),
            _norm_pairs(d["pairs"]),
            tuple(_frac(c) for c in d["numerator"]),
            tuple(d["train"]),
            tuple(d["held_out"]),
            bool(d["accepted"]),
        )


def fit_prime(zs: Sequence[Fraction], p: int, pairs, num_degree: Optional[int] = None) -> PrimeFit:
    """Solve for the numerator on the training window and test the rest."""
    pairs = _norm_pairs(pairs)
    if any(b >= 0 for _, b in pairs):
        raise ValueError(f"pair exponents of s must be negative: {pairs}")
    M, dl = len(zs), delta(pairs)
    e = M - dl - 2 if num_degree is None else min(num_degree, M - dl - 2)
    if e < 0:
        raise InsufficientDepth(f"depth {M} too small for pairs {list(pairs)} (need ≥ {dl + 2})")
    n = _convolve(denominator_poly(pairs, p), zs, M)
    held = tuple(range(e + 1, M))
    ok = all(n[j] == 0 for j in held)
    num = list(n[: e + 1]) if ok else []
    while num and num[-1] == 0:
        num.pop()
    return PrimeFit(p, pairs, tuple(num), tuple(range(e + 1)), held, ok)


def fit_size(f: PrimeFit) -> tuple:
    """Ranking of accepted fits: Σ|b| plus numerator degree first."""
    return (delta(f.pairs) + len(f.numerator) - 1, sum(abs(a) for a, _ in f.pairs), len(f.pairs), f.pairs)


def candidate_grid(max_a: int = 8, max_b: int = 8, max_factors: int = 3, max_delta: Optional[int] = None) -> Iterator[tuple]:
    """Pair multisets ordered by total size: Σ|b|, then Σ|a|, then length."""
    top = max_factors * max_b if max_delta is None else max_delta
    singles = [(a, -b) for b in range(1, min(max_b, top) + 1) for a in range(-max_a, max_a + 1)]
    sets = [()]
    for k in range(1, max_factors + 1):
        for combo in itertools.combinations_with_replacement(singles, k):
            if delta(combo) <= top:
                sets.append(tuple(sorted(combo)))
    sets = sorted(set(sets), key=lambda s: (delta(s), sum(abs(a) for a, _ in s), len(s), s))
    return iter(sets)


def _lcm_union(sets: Iterable[tuple]) -> tuple:
    acc: Counter = Counter()
    for s in sets:
        acc |= Counter(s)
    return tuple(sorted(acc.elements()))


@dataclass(frozen=True)
class FitResult:
    polynomial: str
    depth: int
    fits: dict  # p -> PrimeFit or None
    search: dict = field(default_factory=dict)

    @property
    def primes(self) -> tuple:
        return tuple(sorted(self.fits))

    @property
    def accepted(self) -> bool:
        return all(f is not None and f.accepted for f in self.fits.values())

    def uniformity(self) -> dict:
        return uniformity_report([self])

    def to_json(self) -> dict:
        u = self.uniformity()
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "fit",
            "polynomial": self.polynomial,
            "depth": self.depth,
            "search": self.search,
            "fits": {str(p): (f.to_json() if f else None) for p, f in sorted(self.fits.items())},
            "uniform": u["uniform"],
            "pairs": u["pairs"],
        }

    @staticmethod
    def from_json(d: dict) -> "FitResult":
        fits = {int(p): (PrimeFit.from_json(f) if f else None) for p, f in d["fits"].items()}
        return FitResult(d["polynomial"], int(d["depth"]), fits, d.get("search", {}))


def fit_rational(
    report: CountReport,
    candidates: Optional[Iterable] = None,
    num_degree: Optional[int] = None,
    max_a: int = 8,
    max_b: int = 8,
    max_factors: int = 3,
) -> FitResult:
    """Smallest accepted pair set per prime.

    Every candidate is validated; among accepted ones the fit with the least
    Σ|b| + numerator degree wins, ties broken by Σ|a|, length and order.
    Without explicit candidates the bounded grid is searched.
    Raises InsufficientDepth if no candidate is testable and NoFit if no
    prime accepts any candidate.
    """
    M = report.depth
    if candidates is None:
        cands = list(candidate_grid(max_a, max_b, max_factors, max_delta=M - 2))
        search = {"grid": {"max_a": max_a, "max_b": max_b, "max_factors": max_factors}}
    else:
        cands = [_norm_pairs(c) for c in candidates]
        search = {"candidates": [[list(x) for x in c] for c in cands]}
    if num_degree is not None:
        search["num_degree"] = num_degree
    zs = {p: zeta_coefficients(report.poincare(p)) for p in report.primes}
    fits: dict = {p: None for p in report.primes}
    tested = False
    for pairs in cands:
        for p in report.primes:
            try:
                res = fit_prime(zs[p], p, pairs, num_degree)
            except InsufficientDepth:
                break
            tested = True
            if res.accepted and (fits[p] is None or fit_size(res) < fit_size(fits[p])):
                fits[p] = res
    if not tested:
        raise InsufficientDepth(f"depth {M} cannot validate any candidate")
    if all(f is None for f in fits.values()):
        raise NoFit(f"no candidate pair set matches the held-out coefficients of {report.polynomial.to_json()}")
    return FitResult(_poly_str(report), M, fits, search)


def _poly_str(report: CountReport) -> str:
    import sympy

    xs = sympy.symbols(report.polynomial.vars)
    expr = sum(c * sympy.Mul(*(x**e for x, e in zip(xs, exps))) for exps, c in report.polynomial.terms)
    return str(expr).replace("**", "^")


def _certificate(z: ZetaRational) -> dict:
    try:
        b, c, pairs = denominator_certificate(z)
    except NotClearable as e:
        return {"ok": False, "error": str(e)}
    return {"ok": True, "b": b, "c": frac_str(c), "pairs": [[int(a), int(bi)] for a, bi in pairs]}


def uniformity_report(fits: Sequence[FitResult]) -> dict:
    """Whether one pair set clears the fitted zeta function at every prime.

    The candidate set is the multiset union of the per-prime accepted sets,
    pruned greedily while it still clears every prime.  A positive verdict
    is evidence consistent with a uniform finite pole list, not a proof.
    """
    polys = {f.polynomial for f in fits}
    per: dict = {}
    for fr in fits:
        per.update(fr.fits)
    primes = sorted(per)
    doc: dict = {
        "schema_version": SCHEMA_VERSION,
        "kind": "uniformity",
        "polynomial": sorted(polys)[0] if len(polys) == 1 else sorted(polys),
        "primes": primes,
        "per_prime": {},
        "uniform": False,
        "pairs": None,
        "same_minimal_set": False,
    }
    reasons = []
    if len(polys) != 1:
        reasons.append("fits belong to different polynomials")
    if len(primes) < 2:
        reasons.append("fewer than two primes")
    missing = [p for p in primes if per[p] is None or not per[p].accepted]
    if missing:
        reasons.append(f"no accepted fit for p in {missing}")
    good = {p: per[p] for p in primes if p not in missing}
    zetas = {p: f.zeta() for p, f in good.items()}
    union = list(_lcm_union(f.pairs for f in good.values()))
    for x in sorted(set(union), key=lambda x: (-abs(x[1]), -abs(x[0]), x)):
        while x in union:
            trial = list(union)
            trial.remove(x)
            if all(clears_with(z, trial) for z in zetas.values()):
                union = trial
            else:
                break
    for p in primes:
        f = per[p]
        entry: dict = {"accepted": bool(f and f.accepted)}
        if p in good:
            entry["pairs"] = [list(x) for x in good[p].pairs]
            entry["certificate"] = _certificate(zetas[p])
            entry["clears_with_uniform_set"] = clears_with(zetas[p], union)
            if not entry["certificate"]["ok"]:
                reasons.append(f"certificate failed for p = {p}")
            if not entry["clears_with_uniform_set"]:
                reasons.append(f"uniform set does not clear p = {p}")
        doc["per_prime"][str(p)] = entry
    if good:
        doc["pairs"] = [list(x) for x in union]
        doc["same_minimal_set"] = len({f.pairs for f in good.values()}) == 1 and not missing
    doc["uniform"] = not reasons
    doc["reasons"] = reasons
    doc["statement"] = (
        "consistent with one denominator pair set for all tested primes at this depth"
        if not reasons
        else "no single pair set certified for the tested primes"
    )
    return doc
