"""Root counts N_m = #{x mod p^m : f(x) ≡ 0 mod p^m} across primes."""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..cfun.aring import _frac, frac_str
from ..padic.roots import DEFAULT_BUDGET, IntPoly, as_poly, count_roots_levels

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CountReport:
    polynomial: IntPoly
    primes: tuple
    depth: int
    counts: dict  # p -> (N_0, ..., N_M)
    timing: Optional[dict] = field(default=None, compare=False)

    @property
    def nvars(self) -> int:
        return self.polynomial.nvars

    def poincare(self, p: int) -> list:
        """N_m · p^(−d m): the measure of {x ∈ Z_p^d : ord f(x) ≥ m}."""
        d = self.nvars
        return [Fraction(n, p ** (d * m)) for m, n in enumerate(self.counts[p])]

    def budget_stats(self) -> dict:
        """Nodes visited by the lifting tree: Σ_{j<M} N_j p^d per prime."""
        d = self.nvars
        return {p: sum(self.counts[p][j] * p**d for j in range(self.depth)) for p in self.primes}

    def to_json(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "kind": "counts",
            "polynomial": self.polynomial.to_json(),
            "primes": list(self.primes),
            "depth": self.depth,
            "counts": {str(p): list(self.counts[p]) for p in self.primes},
            "poincare": {str(p): [frac_str(c) for c in self.poincare(p)] for p in self.primes},
            "budget": {str(p): n for p, n in self.budget_stats().items()},
        }
        if self.timing is not None:
            out["timing"] = {str(p): round(s, 6) for p, s in self.timing.items()}
        return out

    @staticmethod
    def from_json(d: dict) -> "CountReport":
        primes = tuple(int(p) for p in d["primes"])
        counts = {int(p): tuple(int(n) for n in row) for p, row in d["counts"].items()}
        rep = CountReport(IntPoly.from_json(d["polynomial"]), primes, int(d["depth"]), counts)
        for p in primes:
            if len(counts[p]) != rep.depth + 1 or counts[p][0] != 1:
                raise ValueError(f"malformed counts for p = {p}")
            if "poincare" in d and [_frac(c) for c in d["poincare"][str(p)]] != rep.poincare(p):
                raise ValueError(f"Poincaré coefficients disagree with counts for p = {p}")
        return rep

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["prime", "m", "N_m", "poincare"])
        for p in self.primes:
            for m, (n, c) in enumerate(zip(self.counts[p], self.poincare(p))):
                w.writerow([p, m, n, frac_str(c)])
        return buf.getvalue()


def _one_prime(args):
    f, p, depth, budget = args
    t0 = time.perf_counter()
    counts = count_roots_levels(f, p, depth, budget)
    return p, tuple(counts), time.perf_counter() - t0


def cmd_count(
    poly, primes: Sequence[int], depth: int, budget: int = DEFAULT_BUDGET, timing: bool = False, workers: int = 1
) -> CountReport:
    """Count roots of ``poly`` modulo p^m for m ≤ depth and each prime.

    Each prime gets its own budget of lifting-tree nodes.  Timing is only
    recorded on request, since it would break byte-identical reports.
    """
    f = as_poly(poly)
    primes = tuple(sorted(set(int(p) for p in primes)))
    jobs = [(f, p, depth, budget) for p in primes]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_one_prime, jobs))
    else:
        results = [_one_prime(j) for j in jobs]
    counts = {p: c for p, c, _ in results}
    times = {p: s for p, _, s in results} if timing else None
    return CountReport(f, primes, depth, counts, times)
